"""Left-invariant quaternionic frame on the three-sphere.

S^3(R) is the set of quaternions of norm R.  The frame is X_j(q) = q*e_j/R
(quaternion product, e_1=i, e_2=j, e_3=k): orthonormal, positively oriented,
left-invariant, with brackets [X_i, X_j] = (2/R) eps_{ijk} X_k.  Scalar fields
on the sphere are ambient expressions in x1..x4 restricted to |x| = R; frame
derivatives are ambient directional derivatives along the X_j, which are
intrinsic because the X_j are tangent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .charts import Chart, ChartPoint
from .expr import Expr
from .jets import Jet2, eval_jet2


def quat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return np.array([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ])


def quat_conj(a: np.ndarray) -> np.ndarray:
    return np.array([a[0], -a[1], -a[2], -a[3]])


def quat_exp_imag(v: np.ndarray) -> np.ndarray:
    """exp of the pure quaternion v = (v1, v2, v3)."""
    t = np.linalg.norm(v)
    if t == 0.0:
        return np.array([1.0, 0.0, 0.0, 0.0])
    return np.concatenate([[math.cos(t)], math.sin(t) * np.asarray(v) / t])


# unit imaginary quaternions e_1 = i, e_2 = j, e_3 = k
E_UNITS = (
    np.array([0.0, 1.0, 0.0, 0.0]),
    np.array([0.0, 0.0, 1.0, 0.0]),
    np.array([0.0, 0.0, 0.0, 1.0]),
)

OFF_SPHERE_TOL = 1e-9


class OffSphereError(ValueError):
    pass


@dataclass(frozen=True)
class QuaternionFrame:
    """The frame {X_j} and dual coframe {theta^j} on S^3(R)."""

    radius: float = 1.0

    def check(self, q: np.ndarray) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        r = np.linalg.norm(q)
        if abs(r - self.radius) > OFF_SPHERE_TOL * max(1.0, self.radius):
            raise OffSphereError(f"|q| = {r!r}, expected {self.radius!r}")
        return q

    def frame_at(self, q: np.ndarray) -> np.ndarray:
        """Rows are the unit tangent vectors X_1, X_2, X_3 at q."""
        q = self.check(q)
        return np.stack([quat_mul(q, e) for e in E_UNITS]) / self.radius

    @property
    def structure_constant(self) -> float:
        """c in [X_i, X_j] = c * eps_{ijk} X_k."""
        return 2.0 / self.radius

    def flow_x3(self, q: np.ndarray, t: float) -> np.ndarray:
        """Integral curve of X_3 through q at time t (right translation)."""
        q = self.check(q)
        return quat_mul(q, quat_exp_imag(np.array([0.0, 0.0, t / self.radius])))


def hopf_ambient(q: np.ndarray) -> np.ndarray:
    """Hopf projection of a unit quaternion to the radius-1/2 sphere in R^3.

    pi(q) = Im(q k conj(q)) / 2; constant along the X_3 flow because k
    commutes with exp(t k).
    """
    q = np.asarray(q, dtype=float)
    p = quat_mul(quat_mul(q, E_UNITS[2]), quat_conj(q))
    return 0.5 * p[1:]


def hopf_projection(q: np.ndarray) -> ChartPoint:
    """Hopf projection in stereographic coordinates on S^2(1/2).

    Projects from the pole (0, 0, 1/2); the fibre over that pole has no
    stereographic image.
    """
    p = hopf_ambient(q)
    denom = 1.0 - 2.0 * p[2]
    if abs(denom) < 1e-12:
        raise ValueError("point projects to the stereographic pole")
    return ChartPoint(Chart.S2_STEREO, (p[0] / denom, p[1] / denom))


# ----------------------------------------------------------------------------
# Scalar fields on the sphere: value plus first and second frame derivatives
# ----------------------------------------------------------------------------

class ThirdOrderUnavailable(RuntimeError):
    """A frame derivative of an already-derived field was requested twice."""


class AmbientScalar:
    """Interface: value(x), d1(frame, x, j) = X_j f, d2(frame, x, i, j) = X_i X_j f."""

    def value(self, x: np.ndarray) -> float:
        raise NotImplementedError

    def d1(self, frame: QuaternionFrame, x: np.ndarray, j: int) -> float:
        raise NotImplementedError

    def d2(self, frame: QuaternionFrame, x: np.ndarray, i: int, j: int) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstScalar(AmbientScalar):
    c: float

    def value(self, x):
        return self.c

    def d1(self, frame, x, j):
        return 0.0

    def d2(self, frame, x, i, j):
        return 0.0


class ExprScalar(AmbientScalar):
    """Ambient expression in x1..x4; jets evaluated in the S3_AMBIENT chart."""

    def __init__(self, expr: Expr, radius: float = 1.0):
        self.expr = expr
        self.radius = radius
        self._cache_key: tuple | None = None
        self._cache_jet: Jet2 | None = None

    def _jet(self, x: np.ndarray) -> Jet2:
        key = tuple(x)
        if key != self._cache_key:
            p = ChartPoint(Chart.S3_AMBIENT, key, radius=self.radius)
            self._cache_jet = eval_jet2(self.expr, p)
            self._cache_key = key
        return self._cache_jet

    def value(self, x):
        return self._jet(np.asarray(x, dtype=float)).value

    def d1(self, frame, x, j):
        jet = self._jet(np.asarray(x, dtype=float))
        return float(jet.grad @ frame.frame_at(x)[j])

    def d2(self, frame, x, i, j):
        # X_i X_j f = X_i^T H X_j + grad . D_{X_i}(X_j-extension),
        # and the extension x e_j / R is linear: its derivative along v is v e_j / R.
        x = np.asarray(x, dtype=float)
        jet = self._jet(x)
        fr = frame.frame_at(x)
        dxj = quat_mul(fr[i], E_UNITS[j]) / frame.radius
        return float(fr[i] @ jet.hess @ fr[j] + jet.grad @ dxj)


@dataclass(frozen=True)
class FrameDerivScalar(AmbientScalar):
    """X_j applied to a base field; differentiable once more, not twice."""

    base: AmbientScalar
    j: int

    def value(self, x):
        raise NotImplementedError  # needs a frame; use d-aware accessors below

    def value_f(self, frame, x):
        return self.base.d1(frame, x, self.j)

    def d1(self, frame, x, i):
        return self.base.d2(frame, x, i, self.j)

    def d2(self, frame, x, i, j):
        raise ThirdOrderUnavailable(
            "third frame derivatives are outside the second-order jet budget"
        )


@dataclass(frozen=True)
class LinCombScalar(AmbientScalar):
    """Sum of coefficient * field terms; fields may be frame-derived."""

    terms: tuple[tuple[float, AmbientScalar], ...]

    def value_f(self, frame, x):
        return sum(c * _value(f, frame, x) for c, f in self.terms)

    def value(self, x):
        raise NotImplementedError("use value_f; terms may need the frame")

    def d1(self, frame, x, j):
        return sum(c * f.d1(frame, x, j) for c, f in self.terms)

    def d2(self, frame, x, i, j):
        return sum(c * f.d2(frame, x, i, j) for c, f in self.terms)


def _value(f: AmbientScalar, frame: QuaternionFrame, x: np.ndarray) -> float:
    if isinstance(f, (FrameDerivScalar, LinCombScalar)):
        return f.value_f(frame, x)
    return f.value(x)


def scalar_value(f: AmbientScalar, frame: QuaternionFrame, x: np.ndarray) -> float:
    return _value(f, frame, x)


def as_scalar(v, radius: float = 1.0) -> AmbientScalar:
    if isinstance(v, AmbientScalar):
        return v
    if isinstance(v, Expr):
        return ExprScalar(v, radius=radius)
    if isinstance(v, (int, float)):
        return ConstScalar(float(v))
    raise TypeError(f"cannot interpret {type(v).__name__} as a scalar field")
