"""Dense second-order forward-mode jets.

A `Jet2` carries a value, a gradient, and a symmetric Hessian with respect to
the chart coordinates.  Arithmetic propagates both derivative orders exactly
(Leibniz plus second-order chain rule); charts have dimension at most four, so
dense storage is cheap.  `fd_oracle` provides the independent central-difference
check used throughout the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .charts import CHART_SYMBOLS, ChartPoint
from .expr import (
    Add, Call, Div, DomainError, Expr, ExprError, Mul, Neg, Num, Pow, Sub, Sym,
    const_value, eval_value,
)


@dataclass
class Jet2:
    value: float
    grad: np.ndarray      # shape (n,)
    hess: np.ndarray      # shape (n, n), symmetric

    @property
    def dim(self) -> int:
        return self.grad.shape[0]

    # -- constructors ------------------------------------------------------

    @staticmethod
    def constant(v: float, n: int) -> "Jet2":
        return Jet2(float(v), np.zeros(n), np.zeros((n, n)))

    @staticmethod
    def coordinate(v: float, i: int, n: int) -> "Jet2":
        g = np.zeros(n)
        g[i] = 1.0
        return Jet2(float(v), g, np.zeros((n, n)))

    # -- ring operations ---------------------------------------------------

    def __add__(self, o):
        o = _as_jet(o, self.dim)
        return Jet2(self.value + o.value, self.grad + o.grad, self.hess + o.hess)

    __radd__ = __add__

    def __sub__(self, o):
        o = _as_jet(o, self.dim)
        return Jet2(self.value - o.value, self.grad - o.grad, self.hess - o.hess)

    def __rsub__(self, o):
        return _as_jet(o, self.dim) - self

    def __neg__(self):
        return Jet2(-self.value, -self.grad, -self.hess)

    def __mul__(self, o):
        o = _as_jet(o, self.dim)
        outer = np.outer(self.grad, o.grad)
        return Jet2(
            self.value * o.value,
            self.value * o.grad + o.value * self.grad,
            self.value * o.hess + o.value * self.hess + outer + outer.T,
        )

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _as_jet(o, self.dim)
        if o.value == 0.0:
            raise DomainError("division by zero")
        return self * o._unary(1.0 / o.value, -1.0 / o.value**2, 2.0 / o.value**3)

    def __rtruediv__(self, o):
        return _as_jet(o, self.dim) / self

    # -- scalar chain rule: w(f), given w, w', w'' at f.value ---------------

    def _unary(self, w: float, dw: float, d2w: float) -> "Jet2":
        outer = np.outer(self.grad, self.grad)
        return Jet2(w, dw * self.grad, dw * self.hess + d2w * outer)

    def pow(self, c: float) -> "Jet2":
        v = self.value
        if c == int(c):
            k = int(c)
            if v == 0.0 and k < 2:
                if k >= 0:
                    # 0^0 = 1, 0^1 = 0 with well-defined jets
                    return self if k == 1 else Jet2.constant(1.0, self.dim)
                raise DomainError("0 raised to a negative power")
            return self._unary(v**k, k * v ** (k - 1), k * (k - 1) * v ** (k - 2))
        if v <= 0.0:
            raise DomainError("real exponent needs a positive base")
        return self._unary(v**c, c * v ** (c - 1.0), c * (c - 1.0) * v ** (c - 2.0))

    def sin(self) -> "Jet2":
        s, c = math.sin(self.value), math.cos(self.value)
        return self._unary(s, c, -s)

    def cos(self) -> "Jet2":
        s, c = math.sin(self.value), math.cos(self.value)
        return self._unary(c, -s, -c)

    def exp(self) -> "Jet2":
        w = math.exp(self.value)
        return self._unary(w, w, w)

    def log(self) -> "Jet2":
        if self.value <= 0.0:
            raise DomainError("log of a nonpositive value")
        v = self.value
        return self._unary(math.log(v), 1.0 / v, -1.0 / v**2)

    def sqrt(self) -> "Jet2":
        if self.value <= 0.0:
            raise DomainError("sqrt of a nonpositive value")
        w = math.sqrt(self.value)
        return self._unary(w, 0.5 / w, -0.25 / w**3)


def _as_jet(v, n: int) -> Jet2:
    if isinstance(v, Jet2):
        return v
    return Jet2.constant(float(v), n)


def jet_atan2(y: Jet2, x: Jet2) -> Jet2:
    """atan2 of two jets via the full two-argument second-order chain rule."""
    r2 = x.value**2 + y.value**2
    if r2 == 0.0:
        raise DomainError("atan2(0, 0)")
    ay = x.value / r2
    ax = -y.value / r2
    ayy = -2.0 * x.value * y.value / r2**2
    axx = 2.0 * x.value * y.value / r2**2
    axy = (y.value**2 - x.value**2) / r2**2
    gy, gx = y.grad, x.grad
    cross = np.outer(gy, gx)
    hess = (
        ay * y.hess + ax * x.hess
        + ayy * np.outer(gy, gy) + axx * np.outer(gx, gx)
        + axy * (cross + cross.T)
    )
    return Jet2(math.atan2(y.value, x.value), ay * gy + ax * gx, hess)


def eval_jet2(e: Expr, p: ChartPoint) -> Jet2:
    """Value, gradient and Hessian of `e` at `p`, exact to rounding."""
    n = p.dim
    seeds = {
        name: Jet2.coordinate(p.coords[i], i, n)
        for i, name in enumerate(CHART_SYMBOLS[p.chart])
    }
    return _eval(e, seeds, n)


def _eval(e: Expr, seeds: dict[str, Jet2], n: int) -> Jet2:
    if isinstance(e, Num):
        return Jet2.constant(e.value, n)
    if isinstance(e, Sym):
        try:
            return seeds[e.name]
        except KeyError:
            raise ExprError(f"chart does not supply symbol {e.name!r}") from None
    if isinstance(e, Neg):
        return -_eval(e.arg, seeds, n)
    if isinstance(e, Add):
        return _eval(e.left, seeds, n) + _eval(e.right, seeds, n)
    if isinstance(e, Sub):
        return _eval(e.left, seeds, n) - _eval(e.right, seeds, n)
    if isinstance(e, Mul):
        return _eval(e.left, seeds, n) * _eval(e.right, seeds, n)
    if isinstance(e, Div):
        return _eval(e.left, seeds, n) / _eval(e.right, seeds, n)
    if isinstance(e, Pow):
        return _eval(e.base, seeds, n).pow(const_value(e.exponent))
    if isinstance(e, Call):
        if e.func == "atan2":
            return jet_atan2(_eval(e.args[0], seeds, n), _eval(e.args[1], seeds, n))
        a = _eval(e.args[0], seeds, n)
        return getattr(a, e.func)()
    raise TypeError(f"not an Expr node: {e!r}")


DEFAULT_FD_STEP = 1e-4


def fd_oracle(e: Expr, p: ChartPoint, h: float = DEFAULT_FD_STEP) -> Jet2:
    """Central-difference gradient/Hessian of `e` at `p` (O(h^2) accurate).

    Independent of the jet arithmetic: only plain evaluations are used.
    A stencil point at an analytic singularity raises DomainError.
    """
    if h <= 0.0:
        raise ValueError("step must be positive")
    syms = CHART_SYMBOLS[p.chart]
    n = p.dim

    def f(deltas: dict[int, float]) -> float:
        env = {name: p.coords[i] + deltas.get(i, 0.0) for i, name in enumerate(syms)}
        return eval_value(e, env)

    value = f({})
    grad = np.zeros(n)
    hess = np.zeros((n, n))
    for i in range(n):
        fp, fm = f({i: h}), f({i: -h})
        grad[i] = (fp - fm) / (2 * h)
        hess[i, i] = (fp - 2 * value + fm) / h**2
    for i in range(n):
        for j in range(i + 1, n):
            fpp = f({i: h, j: h})
            fpm = f({i: h, j: -h})
            fmp = f({i: -h, j: h})
            fmm = f({i: -h, j: -h})
            hess[i, j] = hess[j, i] = (fpp - fpm - fmp + fmm) / (4 * h**2)
    return Jet2(value, grad, hess)
