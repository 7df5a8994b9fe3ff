"""Curvature of a metric field at a point, from exact second-order jets.

Sign conventions: R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z -
nabla_[X,Y] Z and Ric(X,Y) = trace(Z -> R(Z,X)Z=Y); with these the unit
three-sphere has Ric = 2h and scalar curvature 6, and a constant-curvature
space satisfies R_ijkl = kappa (g_ik g_jl - g_il g_jk).

All reported norms are Frobenius norms of components in a g-orthonormal
frame obtained from the Cholesky factor of g (so they are chart-independent
up to rounding).  The frame is positively oriented with respect to the
coordinate order; the metric's `orientation` flag feeds the Hodge star on
two-forms used for the self-dual / anti-self-dual split.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charts import ChartPoint
from .metric import MetricField


class SingularMetricError(ValueError):
    pass


# pair basis for two-forms in four dimensions
PAIRS4 = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

# Hodge star on the PAIRS4 basis in an oriented orthonormal frame:
# *(e0^e1) = e2^e3, *(e0^e2) = -e1^e3, *(e0^e3) = e1^e2, and involutively.
_STAR6 = np.zeros((6, 6))
for _a, _b in ((0, 5), (2, 3)):
    _STAR6[_a, _b] = _STAR6[_b, _a] = 1.0
_STAR6[1, 4] = _STAR6[4, 1] = -1.0


@dataclass
class CurvatureBundle:
    """Everything the residual suite needs about curvature at one point."""

    point: ChartPoint
    g: np.ndarray            # metric values
    ginv: np.ndarray
    frame: np.ndarray        # frame[i, a]: coordinate components of orthonormal e_a
    gamma: np.ndarray        # gamma[k, i, j] = Gamma^k_ij
    riemann: np.ndarray      # fully covariant R_ijkl, coordinate components
    riemann_frame: np.ndarray
    ricci: np.ndarray        # coordinate components
    ricci_frame: np.ndarray
    scalar: float
    weyl: np.ndarray | None = None        # coordinate components, n = 4 only
    weyl_frame: np.ndarray | None = None
    weyl_plus: float = 0.0   # Frobenius norm of the self-dual half
    weyl_minus: float = 0.0

    @property
    def dim(self) -> int:
        return self.g.shape[0]

    @property
    def riemann_norm(self) -> float:
        return float(np.linalg.norm(self.riemann_frame))

    @property
    def ricci_norm(self) -> float:
        return float(np.linalg.norm(self.ricci_frame))


def _chol_frame(G: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    try:
        L = np.linalg.cholesky(G)
    except np.linalg.LinAlgError as e:
        raise SingularMetricError(f"metric not positive definite: {e}") from None
    frame = np.linalg.inv(L).T  # columns are orthonormal, det > 0
    return L, frame


def christoffel(g: MetricField, p: ChartPoint) -> np.ndarray:
    """Gamma[k, i, j] = 1/2 g^{kl} (d_i g_jl + d_j g_il - d_l g_ij)."""
    G, dG, _ = g.jets(p)
    return _christoffel_from_jets(G, dG)


def _christoffel_from_jets(G: np.ndarray, dG: np.ndarray) -> np.ndarray:
    try:
        ginv = np.linalg.inv(G)
    except np.linalg.LinAlgError as e:
        raise SingularMetricError(str(e)) from None
    # lowered symbol T[l, i, j] = 1/2 (d_i g_jl + d_j g_il - d_l g_ij)
    T = 0.5 * (
        np.einsum("jli->lij", dG) + np.einsum("ilj->lij", dG) - np.einsum("ijl->lij", dG)
    )
    return np.einsum("kl,lij->kij", ginv, T)


def curvature_bundle(g: MetricField, p: ChartPoint) -> CurvatureBundle:
    """Christoffel, Riemann, Ricci, scalar, and for n = 4 the Weyl split."""
    G, dG, d2G = g.jets(p)
    n = G.shape[0]
    try:
        ginv = np.linalg.inv(G)
    except np.linalg.LinAlgError as e:
        raise SingularMetricError(str(e)) from None
    _, frame = _chol_frame(G)

    gamma = _christoffel_from_jets(G, dG)

    # d_m Gamma^k_ij = d_m(g^{kl}) T_lij + g^{kl} d_m T_lij
    T = 0.5 * (
        np.einsum("jli->lij", dG) + np.einsum("ilj->lij", dG) - np.einsum("ijl->lij", dG)
    )
    dT = 0.5 * (
        np.einsum("jlim->lijm", d2G)
        + np.einsum("iljm->lijm", d2G)
        - np.einsum("ijlm->lijm", d2G)
    )
    dginv = -np.einsum("ka,abm,bl->klm", ginv, dG, ginv)
    dgamma = np.einsum("klm,lij->kijm", dginv, T) + np.einsum("kl,lijm->kijm", ginv, dT)

    # R^l_{jkm}: coefficient of R(d_k, d_m) d_j on d_l
    riem_up = (
        np.einsum("lmjk->ljkm", dgamma)
        - np.einsum("lkjm->ljkm", dgamma)
        + np.einsum("lka,amj->ljkm", gamma, gamma)
        - np.einsum("lma,akj->ljkm", gamma, gamma)
    )
    riem = np.einsum("il,ljkm->ijkm", G, riem_up)
    ric = np.einsum("ajas->sj", riem_up)
    scalar = float(np.einsum("ij,ij->", ginv, ric))

    riem_f = np.einsum("ia,jb,kc,ld,ijkl->abcd", frame, frame, frame, frame, riem)
    ric_f = frame.T @ ric @ frame

    bundle = CurvatureBundle(
        point=p, g=G, ginv=ginv, frame=frame, gamma=gamma,
        riemann=riem, riemann_frame=riem_f, ricci=ric, ricci_frame=ric_f,
        scalar=scalar,
    )
    if n == 4:
        _attach_weyl(bundle, g.orientation)
    return bundle


def _kulkarni_nomizu(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return (
        np.einsum("ik,jl->ijkl", A, B)
        + np.einsum("jl,ik->ijkl", A, B)
        - np.einsum("il,jk->ijkl", A, B)
        - np.einsum("jk,il->ijkl", A, B)
    )


def _attach_weyl(b: CurvatureBundle, orientation: int) -> None:
    n = 4
    G, ric, S = b.g, b.ricci, b.scalar
    E = ric - (S / n) * G  # trace-free Ricci
    W = (
        b.riemann
        - _kulkarni_nomizu(E, G) / (n - 2)
        - (S / (2 * n * (n - 1))) * _kulkarni_nomizu(G, G)
    )
    b.weyl = W
    Wf = np.einsum("ia,jb,kc,ld,ijkl->abcd", b.frame, b.frame, b.frame, b.frame, W)
    b.weyl_frame = Wf
    M = np.array([[Wf[a, b_, c, d] for (c, d) in PAIRS4] for (a, b_) in PAIRS4])
    H = orientation * _STAR6
    Pp, Pm = 0.5 * (np.eye(6) + H), 0.5 * (np.eye(6) - H)
    b.weyl_plus = float(np.linalg.norm(Pp @ M @ Pp))
    b.weyl_minus = float(np.linalg.norm(Pm @ M @ Pm))


def einstein_residual(b: CurvatureBundle) -> float:
    """|Ric - (S/n) g| / |g| in the orthonormal frame."""
    n = b.dim
    dev = b.ricci_frame - (b.scalar / n) * np.eye(n)
    return float(np.linalg.norm(dev) / np.sqrt(n))


def einstein_constant_residual(b: CurvatureBundle, c: float) -> float:
    """|Ric - c g| in the orthonormal frame (c is the Einstein constant)."""
    return float(np.linalg.norm(b.ricci_frame - c * np.eye(b.dim)))


def constant_curvature_residual(b: CurvatureBundle, kappa: float) -> float:
    """|R_ijkl - kappa (g_ik g_jl - g_il g_jk)| in the orthonormal frame."""
    n = b.dim
    eye = np.eye(n)
    target = kappa * (
        np.einsum("ik,jl->ijkl", eye, eye) - np.einsum("il,jk->ijkl", eye, eye)
    )
    return float(np.linalg.norm(b.riemann_frame - target))


# ----------------------------------------------------------------------------
# consistency diagnostics used by the test suite
# ----------------------------------------------------------------------------

def bianchi_residual(b: CurvatureBundle) -> float:
    """Normalized first-Bianchi defect max |R_i[jkl]|."""
    R = b.riemann_frame
    total = R + np.transpose(R, (0, 2, 3, 1)) + np.transpose(R, (0, 3, 1, 2))
    return float(np.abs(total).max() / (1.0 + np.abs(R).max()))


def riemann_symmetry_residual(b: CurvatureBundle) -> float:
    R = b.riemann_frame
    scale = 1.0 + np.abs(R).max()
    r1 = np.abs(R + np.transpose(R, (1, 0, 2, 3))).max()
    r2 = np.abs(R + np.transpose(R, (0, 1, 3, 2))).max()
    r3 = np.abs(R - np.transpose(R, (2, 3, 0, 1))).max()
    return float(max(r1, r2, r3) / scale)


def weyl_trace_residual(b: CurvatureBundle) -> float:
    if b.weyl_frame is None:
        raise ValueError("Weyl split only defined for four-dimensional bundles")
    tr = np.einsum("abad->bd", b.weyl_frame)
    return float(np.abs(tr).max() / (1.0 + np.abs(b.weyl_frame).max()))


def weyl_decomposition_residual(b: CurvatureBundle) -> float:
    """|Riem - (Weyl + Ricci part + scalar part)| in coordinates, normalized."""
    if b.weyl is None:
        raise ValueError("Weyl split only defined for four-dimensional bundles")
    n = b.dim
    E = b.ricci - (b.scalar / n) * b.g
    rebuilt = (
        b.weyl
        + _kulkarni_nomizu(E, b.g) / (n - 2)
        + (b.scalar / (2 * n * (n - 1))) * _kulkarni_nomizu(b.g, b.g)
    )
    return float(np.abs(b.riemann - rebuilt).max() / (1.0 + np.abs(b.riemann).max()))


def riemann_via_fd_christoffel(g: MetricField, p: ChartPoint, h: float = 1e-5) -> np.ndarray:
    """Covariant Riemann with dGamma from central differences of christoffel().

    Independent of the jets' second-derivative path; used as the
    path-independence check.
    """
    G = g.values(p)
    gamma = christoffel(g, p)
    n = G.shape[0]
    dgamma = np.zeros((n, n, n, n))  # [k, i, j, m] = d_m Gamma^k_ij
    for m in range(n):
        cp = list(p.coords)
        cp[m] += h
        gp = christoffel(g, ChartPoint(p.chart, tuple(cp), radius=p.radius))
        cp[m] -= 2 * h
        gm = christoffel(g, ChartPoint(p.chart, tuple(cp), radius=p.radius))
        dgamma[:, :, :, m] = (gp - gm) / (2 * h)
    riem_up = (
        np.einsum("lmjk->ljkm", dgamma)
        - np.einsum("lkjm->ljkm", dgamma)
        + np.einsum("lka,amj->ljkm", gamma, gamma)
        - np.einsum("lma,akj->ljkm", gamma, gamma)
    )
    return np.einsum("il,ljkm->ijkm", G, riem_up)
