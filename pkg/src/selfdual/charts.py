"""Coordinate charts and chart points.

Every field in the library is evaluated on one of a small, fixed set of
charts.  A chart fixes the dimension, the coordinate symbols the expression
DSL may use, and (for sphere charts) the ambient constraint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum


class Chart(Enum):
    R4_CARTESIAN = "R4_CARTESIAN"        # (x1, x2, x3, x4) on R^4 \ {0} for the radial ansatz
    R1xR3 = "R1xR3"                      # (t, x1, x2, x3), fibre coordinate first
    PRODUCT_RHO_STEREO = "PRODUCT_RHO_STEREO"  # (rho, y1, y2, y3), rho > 0, stereographic base
    S3_AMBIENT = "S3_AMBIENT"            # (x1, x2, x3, x4) with |x| = R
    R3_CARTESIAN = "R3_CARTESIAN"        # (x1, x2, x3)
    S2_STEREO = "S2_STEREO"              # (y1, y2)


CHART_SYMBOLS: dict[Chart, tuple[str, ...]] = {
    Chart.R4_CARTESIAN: ("x1", "x2", "x3", "x4"),
    Chart.R1xR3: ("t", "x1", "x2", "x3"),
    Chart.PRODUCT_RHO_STEREO: ("rho", "y1", "y2", "y3"),
    Chart.S3_AMBIENT: ("x1", "x2", "x3", "x4"),
    Chart.R3_CARTESIAN: ("x1", "x2", "x3"),
    Chart.S2_STEREO: ("y1", "y2"),
}

SPHERE_TOL = 1e-12


class ChartError(ValueError):
    """Point does not satisfy its chart's constraints."""


@dataclass(frozen=True)
class ChartPoint:
    """A point of a chart: coordinates plus, for sphere charts, the radius."""

    chart: Chart
    coords: tuple[float, ...]
    radius: float = field(default=1.0)

    def __post_init__(self):
        expected = len(CHART_SYMBOLS[self.chart])
        if len(self.coords) != expected:
            raise ChartError(
                f"{self.chart.value} needs {expected} coordinates, got {len(self.coords)}"
            )
        if self.chart is Chart.S3_AMBIENT:
            r = math.sqrt(sum(c * c for c in self.coords))
            if abs(r - self.radius) > SPHERE_TOL * max(1.0, self.radius):
                raise ChartError(
                    f"S3_AMBIENT point has |x| = {r!r}, expected {self.radius!r}"
                )

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def symbols(self) -> tuple[str, ...]:
        return CHART_SYMBOLS[self.chart]


def point(chart: Chart, *coords: float, radius: float = 1.0) -> ChartPoint:
    """Convenience constructor, `point(Chart.R3_CARTESIAN, 1, 2, 3)`."""
    return ChartPoint(chart, tuple(float(c) for c in coords), radius=radius)
