"""Differential forms in the left-invariant coframe, and their residuals.

One-forms on S^3(R) are written A = A_j theta^j; two-forms in the basis
(theta^2^theta^3, theta^3^theta^1, theta^1^theta^2).  With the structure
constants [X_i, X_j] = (2/R) eps_{ijk} X_k the exterior derivative of a
one-form has components

    (dA)_k = eps_{kij} X_i(A_j) - (2/R) A_k      (k-th two-form component)

and the Hodge star for the orientation theta^1^theta^2^theta^3 swaps the two
coefficient triples identically.  The module also carries the flat exterior
calculus on R^3 needed by the monopole equation du = *dA.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charts import Chart, ChartPoint
from .expr import Expr
from .frames import (
    AmbientScalar, ConstScalar, FrameDerivScalar, LinCombScalar, QuaternionFrame,
    as_scalar, scalar_value,
)
from .jets import eval_jet2

_EPS = np.zeros((3, 3, 3))
for _i, _j, _k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
    _EPS[_i, _j, _k] = 1.0
    _EPS[_i, _k, _j] = -1.0


@dataclass(frozen=True)
class FrameOneForm:
    frame: QuaternionFrame
    coeffs: tuple[AmbientScalar, AmbientScalar, AmbientScalar]

    def at(self, q: np.ndarray) -> np.ndarray:
        return np.array([scalar_value(c, self.frame, q) for c in self.coeffs])


@dataclass(frozen=True)
class FrameTwoForm:
    frame: QuaternionFrame
    coeffs: tuple[AmbientScalar, AmbientScalar, AmbientScalar]

    def at(self, q: np.ndarray) -> np.ndarray:
        return np.array([scalar_value(c, self.frame, q) for c in self.coeffs])


def one_form(frame: QuaternionFrame, *coeffs) -> FrameOneForm:
    """Build A = A_j theta^j from Expr coefficients, numbers, or scalar fields."""
    if len(coeffs) != 3:
        raise ValueError("a frame one-form needs three coefficients")
    return FrameOneForm(frame, tuple(as_scalar(c, radius=frame.radius) for c in coeffs))


def left_invariant(frame: QuaternionFrame, a1: float, a2: float, a3: float) -> FrameOneForm:
    return one_form(frame, ConstScalar(float(a1)), ConstScalar(float(a2)), ConstScalar(float(a3)))


def frame_differential(frame: QuaternionFrame, f: AmbientScalar) -> FrameOneForm:
    """df in the coframe: components X_j(f)."""
    return FrameOneForm(frame, tuple(FrameDerivScalar(f, j) for j in range(3)))


def _lin(*terms: tuple[float, AmbientScalar]) -> AmbientScalar:
    terms = tuple((c, f) for c, f in terms if c != 0.0)
    if not terms:
        return ConstScalar(0.0)
    return LinCombScalar(terms)


def d_frame(A: FrameOneForm) -> FrameTwoForm:
    """Exterior derivative dA(X_i, X_j) = X_i(A_j) - X_j(A_i) - A([X_i, X_j])."""
    c = A.frame.structure_constant
    a1, a2, a3 = A.coeffs
    # component k is dA(X_i, X_j) for (k,i,j) cyclic
    b1 = _lin((1.0, FrameDerivScalar(a3, 1)), (-1.0, FrameDerivScalar(a2, 2)), (-c, a1))
    b2 = _lin((1.0, FrameDerivScalar(a1, 2)), (-1.0, FrameDerivScalar(a3, 0)), (-c, a2))
    b3 = _lin((1.0, FrameDerivScalar(a2, 0)), (-1.0, FrameDerivScalar(a1, 1)), (-c, a3))
    return FrameTwoForm(A.frame, (b1, b2, b3))


def hodge3(form: FrameOneForm | FrameTwoForm) -> FrameTwoForm | FrameOneForm:
    """Hodge star for the positive orientation: *theta^1 = theta^2^theta^3 and cyclic.

    On coefficient triples the star is the identity, so ** = id exactly.
    """
    if isinstance(form, FrameOneForm):
        return FrameTwoForm(form.frame, form.coeffs)
    return FrameOneForm(form.frame, form.coeffs)


def beltrami_residual(A: FrameOneForm, c: float) -> FrameTwoForm:
    """dA + c * (*A); vanishes iff A solves the Beltrami fields equation."""
    dA = d_frame(A)
    star = hodge3(A)
    coeffs = tuple(
        _lin((1.0, da), (float(c), sa)) for da, sa in zip(dA.coeffs, star.coeffs)
    )
    return FrameTwoForm(A.frame, coeffs)


def coclosed_residual(A: FrameOneForm) -> AmbientScalar:
    """*(d(*A)) = X_1(A_1) + X_2(A_2) + X_3(A_3); zero iff A is coclosed.

    For A = df this equals sum_j X_j X_j f = -laplacian under the frame
    Laplacian convention used in the Dirac module.
    """
    return _lin(*((1.0, FrameDerivScalar(a, j)) for j, a in enumerate(A.coeffs)))


# ----------------------------------------------------------------------------
# Euclidean exterior calculus on R^3 (monopole equation)
# ----------------------------------------------------------------------------

def _r3_point(p: ChartPoint) -> ChartPoint:
    if p.chart is not Chart.R3_CARTESIAN:
        raise ValueError("monopole residual is evaluated on the R3_CARTESIAN chart")
    return p


def curl_r3(A: tuple[Expr, Expr, Expr], p: ChartPoint) -> np.ndarray:
    """Components of *dA for A = A_i dx^i on flat R^3, dx1^dx2^dx3 positive."""
    p = _r3_point(p)
    grads = np.stack([eval_jet2(a, p).grad for a in A])  # grads[i, j] = d_j A_i
    return np.array([
        grads[2, 1] - grads[1, 2],
        grads[0, 2] - grads[2, 0],
        grads[1, 0] - grads[0, 1],
    ])


def grad_r3(u: Expr, p: ChartPoint) -> np.ndarray:
    return eval_jet2(u, _r3_point(p)).grad


def monopole_residual(u: Expr, A: tuple[Expr, Expr, Expr]):
    """Pointwise components of du - *dA on U within flat R^3.

    Returns a callable ChartPoint -> length-3 array; the Gibbons-Hawking
    ansatz is Einstein iff this vanishes on U.
    """

    def residual(p: ChartPoint) -> np.ndarray:
        return grad_r3(u, p) - curl_r3(A, p)

    return residual
