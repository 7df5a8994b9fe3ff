"""Metric fields on a chart, with entries evaluable as second-order jets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .charts import Chart, ChartPoint
from .expr import Expr, Num
from .jets import Jet2, eval_jet2


class MetricEntry:
    """Anything with a jet(p) -> Jet2 method can serve as a metric entry."""

    def jet(self, p: ChartPoint) -> Jet2:
        raise NotImplementedError


@dataclass(frozen=True)
class ExprEntry(MetricEntry):
    expr: Expr

    def jet(self, p: ChartPoint) -> Jet2:
        return eval_jet2(self.expr, p)


@dataclass(frozen=True)
class CallableEntry(MetricEntry):
    fn: Callable[[ChartPoint], Jet2]

    def jet(self, p: ChartPoint) -> Jet2:
        return self.fn(p)


def as_entry(v) -> MetricEntry:
    if isinstance(v, MetricEntry):
        return v
    if isinstance(v, Expr):
        return ExprEntry(v)
    if isinstance(v, (int, float)):
        return ExprEntry(Num(float(v)))
    if callable(v):
        return CallableEntry(v)
    raise TypeError(f"cannot interpret {type(v).__name__} as a metric entry")


@dataclass(frozen=True)
class MetricField:
    """Symmetric positive-definite bilinear form on a chart.

    `orientation` is the sign of the coordinate frame relative to the chart's
    chosen orientation; it feeds the Hodge eigenspace split on two-forms.
    """

    chart: Chart
    entries: tuple[tuple[MetricEntry, ...], ...]
    orientation: int = field(default=1)

    @property
    def dim(self) -> int:
        return len(self.entries)

    def jets(self, p: ChartPoint) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(G, dG, d2G): values, dG[i,j,k] = d_k g_ij, d2G[i,j,k,l] = d_k d_l g_ij."""
        if p.chart is not self.chart:
            raise ValueError(f"point chart {p.chart} != metric chart {self.chart}")
        n = self.dim
        G = np.zeros((n, n))
        dG = np.zeros((n, n, n))
        d2G = np.zeros((n, n, n, n))
        for i in range(n):
            for j in range(i, n):
                jet = self.entries[i][j].jet(p)
                G[i, j] = G[j, i] = jet.value
                dG[i, j] = dG[j, i] = jet.grad
                d2G[i, j] = d2G[j, i] = 0.5 * (jet.hess + jet.hess.T)
        return G, dG, d2G

    def values(self, p: ChartPoint) -> np.ndarray:
        n = self.dim
        G = np.zeros((n, n))
        for i in range(n):
            for j in range(i, n):
                v = self.entries[i][j].jet(p).value
                G[i, j] = G[j, i] = v
        return G


def metric_from_matrix(chart: Chart, rows: Sequence[Sequence], orientation: int = 1) -> MetricField:
    n = len(rows)
    ents = tuple(tuple(as_entry(rows[i][j]) for j in range(n)) for i in range(n))
    return MetricField(chart, ents, orientation=orientation)
