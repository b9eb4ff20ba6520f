"""Orthonormal polynomial families defined by three-term recurrences.

Each family is stored through its Jacobi coefficients: the recurrence is

    x P_k(x) = offdiag(k) P_{k+1}(x) + diag(k) P_k(x) + offdiag(k-1) P_{k-1}(x)

with P_0 = 1.  All four built-in families have constant coefficients after
the first step, so a recurrence is just four numbers plus a support
interval.  Zeros come from the symmetric tridiagonal truncation of the
Jacobi matrix, and Gauss quadrature weights are Christoffel-function values
at those zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import NumericError, ResourceLimitError

_MAX_QUAD_NODES = 256
_MATRIX_DIM_CAP = 4096
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

__all__ = [
    "ThreeTermRecurrence",
    "QuadratureRule",
    "GrowthCheck",
    "chebyshev_u",
    "chebyshev_u_recurrence",
    "kesten_mckay_recurrence",
    "marchenko_pastur_q_recurrence",
    "bernstein_szego_recurrence",
    "canonical_form",
    "poly_eval",
    "poly_eval_table",
    "poly_eval_matrix",
    "bernstein_szego_eval",
    "jacobi_zeros",
    "christoffel",
    "sup_norm_B",
    "max_christoffel_b",
    "gauss_jacobi",
    "growth_check",
    "leading_coeff_ratio",
]


@dataclass(frozen=True)
class ThreeTermRecurrence:
    """Jacobi coefficients of an orthonormal polynomial family.

    `family` is one of "chebyshev-u", "kesten-mckay", "marchenko-pastur-q",
    "bernstein-szego"; `params` echoes the construction parameters.
    """

    family: str
    params: tuple[float, ...]
    a0: float
    a_rest: float
    b0: float
    b_rest: float
    support: tuple[float, float]

    def __post_init__(self):
        if not (self.b0 > 0.0 and self.b_rest > 0.0):
            raise ValueError("off-diagonal recurrence coefficients must be positive")
        if not self.support[0] < self.support[1]:
            raise ValueError("support interval must be nondegenerate")

    def diag(self, k: int) -> float:
        return self.a0 if k == 0 else self.a_rest

    def offdiag(self, k: int) -> float:
        return self.b0 if k == 0 else self.b_rest

    @property
    def is_canonical(self) -> bool:
        lo, hi = self.support
        return abs(lo + 1.0) <= 1e-12 and abs(hi - 1.0) <= 1e-12


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule: nodes at the zeros of P_m, Christoffel-number weights."""

    m: int
    nodes: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class GrowthCheck:
    min_over_line: float
    boundary_value: float


def chebyshev_u(k: int, x):
    """Chebyshev polynomial of the second kind via 2x U_k = U_{k+1} + U_{k-1}.

    Supports k >= -2 (U_{-1} = 0, U_{-2} = -1), matching the trigonometric
    form sin((k+1)t)/sin(t) at x = cos(t).
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    if k == -1:
        out = np.zeros_like(x)
    elif k == -2:
        out = -np.ones_like(x)
    else:
        prev = np.zeros_like(x)
        cur = np.ones_like(x)
        for _ in range(k):
            prev, cur = cur, 2.0 * x * cur - prev
        out = cur
    return float(out) if scalar else out


def chebyshev_u_recurrence() -> ThreeTermRecurrence:
    """U_k family, orthonormal for the semicircle weight on [-1, 1]."""
    return ThreeTermRecurrence("chebyshev-u", (), 0.0, 0.0, 0.5, 0.5, (-1.0, 1.0))


def kesten_mckay_recurrence(d: int) -> ThreeTermRecurrence:
    """Family attached to d-regular graphs on [-2 sqrt(d-1), 2 sqrt(d-1)].

    Coefficients offdiag(0) = sqrt(d), offdiag(k>=1) = sqrt(d-1), diag = 0
    reproduce the walk-generating recurrence exactly (checked in the tests
    against direct forward evaluation).
    """
    if not (isinstance(d, (int, np.integer)) and d >= 3):
        raise ValueError("degree d must be an integer >= 3")
    hw = 2.0 * math.sqrt(d - 1.0)
    return ThreeTermRecurrence(
        "kesten-mckay", (float(d),), 0.0, 0.0, math.sqrt(d), math.sqrt(d - 1.0), (-hw, hw)
    )


def marchenko_pastur_q_recurrence(xi1: float, xi2: float) -> ThreeTermRecurrence:
    """Covariance-walk family: diag(0)=1, diag(k>=1)=1+xi1, offdiag=sqrt(xi2)."""
    if not xi2 > 0.0:
        raise ValueError("xi2 must be positive")
    b = math.sqrt(xi2)
    center = 1.0 + xi1
    return ThreeTermRecurrence(
        "marchenko-pastur-q",
        (float(xi1), float(xi2)),
        1.0,
        center,
        b,
        b,
        (center - 2.0 * b, center + 2.0 * b),
    )


def bernstein_szego_recurrence(gamma: float, alpha: float, beta: float) -> ThreeTermRecurrence:
    """Short Chebyshev combination gamma (U_k + alpha U_{k-1} + beta U_{k-2}).

    The weight denominator (alpha^2 + (1-beta)^2) + 2 alpha (1+beta) x
    + 4 beta x^2 must stay positive on [-1, 1]; this is checked on a
    Chebyshev-extrema grid including the endpoints.
    """
    if not gamma > 0.0:
        raise ValueError("gamma must be positive")
    if not beta < 1.0:
        raise ValueError("beta must be < 1")
    xs = np.cos(np.linspace(0.0, np.pi, 257))
    den = (alpha**2 + (1.0 - beta) ** 2) + 2.0 * alpha * (1.0 + beta) * xs + 4.0 * beta * xs**2
    if not np.all(den > 0.0):
        raise ValueError("weight denominator is not strictly positive on [-1, 1]")
    return ThreeTermRecurrence(
        "bernstein-szego",
        (float(gamma), float(alpha), float(beta)),
        -alpha / 2.0,
        0.0,
        math.sqrt(1.0 - beta) / 2.0,
        0.5,
        (-1.0, 1.0),
    )


def canonical_form(rec: ThreeTermRecurrence) -> ThreeTermRecurrence:
    """Affinely rescale a family to support [-1, 1] via x = (t - center)/halfwidth."""
    if rec.is_canonical:
        return rec
    lo, hi = rec.support
    center = 0.5 * (lo + hi)
    hw = 0.5 * (hi - lo)
    return ThreeTermRecurrence(
        rec.family,
        rec.params,
        (rec.a0 - center) / hw,
        (rec.a_rest - center) / hw,
        rec.b0 / hw,
        rec.b_rest / hw,
        (-1.0, 1.0),
    )


def poly_eval_table(rec: ThreeTermRecurrence, kmax: int, x) -> np.ndarray:
    """Values of P_0 .. P_kmax at x, stacked along the first axis."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    table = np.empty((kmax + 1,) + x.shape)
    table[0] = 1.0
    if kmax >= 1:
        table[1] = (x - rec.a0) / rec.b0
    for k in range(1, kmax):
        table[k + 1] = (
            (x - rec.diag(k)) * table[k] - rec.offdiag(k - 1) * table[k - 1]
        ) / rec.offdiag(k)
    return table


def poly_eval(rec: ThreeTermRecurrence, k: int, x):
    """P_k(x) by forward recurrence; accepts scalars or arrays."""
    arr = np.asarray(x, dtype=float)
    vals = poly_eval_table(rec, k, arr)[k]
    return float(vals[0]) if arr.ndim == 0 else vals.reshape(arr.shape)


def poly_eval_matrix(rec: ThreeTermRecurrence, k: int, M: np.ndarray) -> np.ndarray:
    """P_k(M) for symmetric M, one matrix product per recurrence step."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("matrix must be square")
    if n > _MATRIX_DIM_CAP:
        raise ResourceLimitError(f"matrix dimension {n} exceeds cap {_MATRIX_DIM_CAP}")
    eye = np.eye(n)
    prev = eye
    if k == 0:
        return prev.copy()
    cur = (M - rec.a0 * eye) / rec.b0
    for j in range(1, k):
        prev, cur = cur, (
            M @ cur - rec.diag(j) * cur - rec.offdiag(j - 1) * prev
        ) / rec.offdiag(j)
    return cur


def bernstein_szego_eval(gamma: float, alpha: float, beta: float, k: int, x):
    """Direct evaluation of gamma (U_k + alpha U_{k-1} + beta U_{k-2}).

    The k = 0 member carries the extra 1/sqrt(1-beta) factor so the family
    is orthonormal for its weight.  Kept independent of the recurrence path
    as a cross-check.
    """
    val = chebyshev_u(k, x) + alpha * chebyshev_u(k - 1, x) + beta * chebyshev_u(k - 2, x)
    if k == 0:
        return gamma / math.sqrt(1.0 - beta) * val
    return gamma * val


def jacobi_zeros(rec: ThreeTermRecurrence, m: int) -> np.ndarray:
    """The m real zeros of P_m, ascending.

    Computed as eigenvalues of the m x m symmetric tridiagonal truncation of
    the Jacobi matrix; bisection on sign changes stays in the tests as an
    independent oracle.
    """
    if not 1 <= m <= _MAX_QUAD_NODES:
        raise ValueError(f"m must be in 1..{_MAX_QUAD_NODES}")
    diag = np.array([rec.diag(j) for j in range(m)])
    off = np.array([rec.offdiag(j) for j in range(m - 1)])
    try:
        if m == 1:
            return diag.copy()
        return eigh_tridiagonal(diag, off, eigvals_only=True)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NumericError(f"tridiagonal eigensolver failed for m={m}: {exc}") from exc


def christoffel(rec: ThreeTermRecurrence, k: int, x):
    """Christoffel function 1 / sum_{i<=k} P_i(x)^2 (positive, <= 1)."""
    arr = np.asarray(x, dtype=float)
    table = poly_eval_table(rec, k, arr)
    vals = 1.0 / np.sum(table * table, axis=0)
    return float(vals[0]) if arr.ndim == 0 else vals.reshape(arr.shape)


def _golden_max(f, lo: float, hi: float, tol: float = 1e-9) -> float:
    """Golden-section maximum of f on [lo, hi]."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return max(fc, fd)


def _grid_refine_max(f, k: int) -> float:
    """Max of f on [-1, 1]: Chebyshev grid of >= 32k points, then local refinement.

    f oscillates at most k+1 times here, so the grid isolates every lobe;
    golden-section refinement is run to convergence since a fixed iteration
    count cannot meet the 1e-6 relative target.
    """
    npts = 32 * max(k, 2)
    xs = np.cos(np.linspace(np.pi, 0.0, npts + 1))  # ascending
    vals = f(xs)
    best = -np.inf
    interior = np.flatnonzero(
        (vals[1:-1] >= vals[:-2]) & (vals[1:-1] >= vals[2:])
    ) + 1
    for i in interior:
        best = max(best, _golden_max(lambda t: float(f(np.asarray(t))), xs[i - 1], xs[i + 1]))
    best = max(best, float(vals[0]), float(vals[-1]))
    return best


def _require_canonical(rec: ThreeTermRecurrence, op: str) -> None:
    if not rec.is_canonical:
        raise ValueError(f"{op} expects the family rescaled to [-1, 1]; use canonical_form()")


@lru_cache(maxsize=4096)
def sup_norm_B(rec: ThreeTermRecurrence, k: int) -> float:
    """B_k = max of |P_k| over [-1, 1] (canonical families only)."""
    _require_canonical(rec, "sup_norm_B")
    if k == 0:
        return 1.0
    return _grid_refine_max(lambda x: np.abs(poly_eval(rec, k, x)), k)


@lru_cache(maxsize=4096)
def max_christoffel_b(rec: ThreeTermRecurrence, k: int) -> float:
    """b_k = max of the Christoffel function over [-1, 1]."""
    _require_canonical(rec, "max_christoffel_b")
    if k == 0:
        return 1.0
    return _grid_refine_max(lambda x: christoffel(rec, k, x), k)


def gauss_jacobi(rec: ThreeTermRecurrence, m: int) -> QuadratureRule:
    """m-node Gauss rule for the family's measure, exact through degree 2m-1."""
    nodes = jacobi_zeros(rec, m)
    weights = christoffel(rec, m - 1, nodes)
    return QuadratureRule(m, nodes, np.atleast_1d(weights))


def leading_coeff_ratio(rec: ThreeTermRecurrence, m: int) -> float:
    """gamma_{m-1}/gamma_m for the orthonormal family; equals offdiag(m-1)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return rec.offdiag(m - 1)


def growth_check(rec: ThreeTermRecurrence, k: int, eps: float) -> GrowthCheck:
    """Probe P_k off the support for the walk families.

    `min_over_line` is the minimum of P_k over a grid 3x wider than the
    support; `boundary_value` is P_k at the support edge pushed out by the
    factor (1 + eps) (the smaller of the two edges for asymmetric families).
    Only meaningful for even k, where P_k is positive and increasing past
    the support edge.
    """
    if rec.family not in ("kesten-mckay", "marchenko-pastur-q"):
        raise ValueError("growth_check applies to the kesten-mckay and marchenko-pastur-q families")
    if k < 2 or k % 2 != 0:
        raise ValueError("k must be an even integer >= 2")
    if not 0.0 <= eps <= 1.0:
        raise ValueError("eps must lie in [0, 1]")
    lo, hi = rec.support
    center = 0.5 * (lo + hi)
    hw = 0.5 * (hi - lo)
    grid = np.linspace(center - 3.0 * hw, center + 3.0 * hw, 10_000)
    min_over_line = float(np.min(poly_eval(rec, k, grid)))
    edge = hw * (1.0 + eps)
    boundary = min(
        float(poly_eval(rec, k, center + edge)),
        float(poly_eval(rec, k, center - edge)),
    )
    return GrowthCheck(min_over_line=min_over_line, boundary_value=boundary)
