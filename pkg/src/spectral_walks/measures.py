"""Limiting spectral measures and Kolmogorov distances.

Densities are closed-form; CDFs use the closed form for the semicircle and
adaptive Simpson quadrature elsewhere.  The square-root substitution that
smooths the hard-edge singularity of the unit-ratio covariance law is the
analytic form of an integrable-singularity split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import poly
from .errors import NumericError

__all__ = [
    "LimitMeasure",
    "EmpiricalSpectrum",
    "wigner_measure",
    "kesten_mckay_measure",
    "kesten_mckay_scaled_measure",
    "marchenko_pastur_measure",
    "marchenko_pastur_scaled_measure",
    "godsil_mohar_measure",
    "bernstein_szego_measure",
    "density",
    "cdf",
    "ks_distance_empirical",
    "ks_distance_measures",
    "moment",
]

_SIMPSON_TOL = 1e-10
_MAX_DEPTH = 60


@dataclass(frozen=True)
class EmpiricalSpectrum:
    """Sorted eigenvalue list with its normalized counting CDF."""

    eigenvalues: np.ndarray
    n: int

    @classmethod
    def from_values(cls, values) -> "EmpiricalSpectrum":
        vals = np.sort(np.asarray(values, dtype=float))
        if vals.size == 0:
            raise ValueError("spectrum must contain at least one eigenvalue")
        if not np.all(np.isfinite(vals)):
            raise ValueError("eigenvalues must be finite")
        return cls(eigenvalues=vals, n=int(vals.size))

    def rescaled(self, center: float, halfwidth: float) -> "EmpiricalSpectrum":
        """Push eigenvalues through x = (t - center)/halfwidth."""
        return EmpiricalSpectrum.from_values((self.eigenvalues - center) / halfwidth)


@dataclass(frozen=True)
class LimitMeasure:
    """One of the closed-form limiting measures, with density and CDF."""

    kind: str
    params: tuple[float, ...]
    support: tuple[float, float]

    # -- density ---------------------------------------------------------

    def density(self, x):
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.zeros_like(arr)
        lo, hi = self.support
        inside = (arr >= lo) & (arr <= hi)
        if np.any(inside):
            out[inside] = self._density_inside(arr[inside])
        return float(out[0]) if np.asarray(x).ndim == 0 else out

    def _density_inside(self, x: np.ndarray) -> np.ndarray:
        lo, hi = self.support
        rad = np.sqrt(np.maximum((x - lo) * (hi - x), 0.0))
        if self.kind == "wigner":
            return (2.0 / math.pi) * rad
        if self.kind == "kesten-mckay":
            (d,) = self.params
            return (d / (2.0 * math.pi)) * rad / (d * d - x * x)
        if self.kind == "kesten-mckay-scaled":
            (d,) = self.params
            return (2.0 * d * (d - 1.0) / math.pi) * rad / (d * d - 4.0 * (d - 1.0) * x * x)
        if self.kind == "marchenko-pastur":
            (xi,) = self.params
            with np.errstate(divide="ignore"):
                return rad / (2.0 * math.pi * xi * x)
        if self.kind == "marchenko-pastur-scaled":
            (xi,) = self.params
            return (2.0 / math.pi) * rad / ((1.0 + xi) + 2.0 * math.sqrt(xi) * x)
        if self.kind == "godsil-mohar":
            xi1, xi2 = self.params
            return rad / (2.0 * math.pi * (xi2 + xi1 * (x - 1.0)))
        if self.kind == "bernstein-szego":
            gamma, alpha, beta = self.params
            den = (alpha**2 + (1.0 - beta) ** 2) + 2.0 * alpha * (1.0 + beta) * x + 4.0 * beta * x**2
            return (2.0 / (math.pi * gamma**2)) * rad / den
        raise ValueError(f"unknown measure kind {self.kind!r}")

    # -- CDF -------------------------------------------------------------

    def cdf(self, x: float) -> float:
        return float(self.cdf_many(np.asarray([x]))[0])

    def cdf_many(self, xs) -> np.ndarray:
        """CDF at an array of points, integrating each gap only once."""
        xs = np.asarray(xs, dtype=float)
        order = np.argsort(xs, kind="stable")
        sorted_xs = xs[order]
        lo, hi = self.support
        clipped = np.clip(sorted_xs, lo, hi)
        if self.kind == "wigner":
            c = np.clip(clipped, -1.0, 1.0)
            vals = 0.5 + (c * np.sqrt(np.maximum(1.0 - c * c, 0.0)) + np.arcsin(c)) / math.pi
        else:
            uniq = np.unique(clipped)
            starts = np.concatenate([[lo], uniq[:-1]])
            pieces = self._segments(starts, uniq)
            cumulative = np.cumsum(pieces)
            vals = cumulative[np.searchsorted(uniq, clipped)]
        vals[sorted_xs < lo] = 0.0
        vals[sorted_xs >= hi] = 1.0
        np.clip(vals, 0.0, 1.0, out=vals)
        out = np.empty_like(vals)
        out[order] = vals
        return out

    def _segments(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Density integrals over the segments [a_i, b_i] inside the support."""
        if self.kind == "marchenko-pastur" and self.params[0] == 1.0:
            # hard edge at 0: substitute t = u^2, after which the integrand
            # sqrt(4 - u^2)/pi is smooth
            f = lambda u: np.sqrt(np.maximum(4.0 - u * u, 0.0)) / math.pi
            a, b = np.sqrt(np.maximum(a, 0.0)), np.sqrt(np.maximum(b, 0.0))
        else:
            f = self.density
        tol = max(_SIMPSON_TOL / max(len(a), 1), 1e-15)
        return _adaptive_simpson_batch(f, a, b, tol)

    # -- companions ------------------------------------------------------

    def recurrence(self) -> poly.ThreeTermRecurrence:
        """The orthonormal polynomial family of this measure, on its support."""
        if self.kind == "wigner":
            return poly.chebyshev_u_recurrence()
        if self.kind == "kesten-mckay":
            return poly.kesten_mckay_recurrence(int(self.params[0]))
        if self.kind == "kesten-mckay-scaled":
            return poly.canonical_form(poly.kesten_mckay_recurrence(int(self.params[0])))
        if self.kind == "marchenko-pastur":
            xi = self.params[0]
            return poly.marchenko_pastur_q_recurrence(xi, xi)
        if self.kind == "marchenko-pastur-scaled":
            xi = self.params[0]
            return poly.canonical_form(poly.marchenko_pastur_q_recurrence(xi, xi))
        if self.kind == "godsil-mohar":
            return poly.marchenko_pastur_q_recurrence(*self.params)
        if self.kind == "bernstein-szego":
            return poly.bernstein_szego_recurrence(*self.params)
        raise ValueError(f"unknown measure kind {self.kind!r}")

    def density_max(self) -> float:
        return _density_max(self)


def wigner_measure() -> LimitMeasure:
    return LimitMeasure("wigner", (), (-1.0, 1.0))


def kesten_mckay_measure(d: int) -> LimitMeasure:
    if d < 3:
        raise ValueError("degree d must be >= 3")
    hw = 2.0 * math.sqrt(d - 1.0)
    return LimitMeasure("kesten-mckay", (float(d),), (-hw, hw))


def kesten_mckay_scaled_measure(d: int) -> LimitMeasure:
    if d < 3:
        raise ValueError("degree d must be >= 3")
    return LimitMeasure("kesten-mckay-scaled", (float(d),), (-1.0, 1.0))


def marchenko_pastur_measure(xi: float) -> LimitMeasure:
    if not 0.0 < xi <= 1.0:
        raise ValueError("xi must lie in (0, 1]")
    s = math.sqrt(xi)
    return LimitMeasure("marchenko-pastur", (float(xi),), ((1.0 - s) ** 2, (1.0 + s) ** 2))


def marchenko_pastur_scaled_measure(xi: float) -> LimitMeasure:
    if not 0.0 < xi <= 1.0:
        raise ValueError("xi must lie in (0, 1]")
    return LimitMeasure("marchenko-pastur-scaled", (float(xi),), (-1.0, 1.0))


def godsil_mohar_measure(xi1: float, xi2: float) -> LimitMeasure:
    """Covariance-walk limiting measure for the bi-regular parameters (xi1, xi2).

    Constructed as the affine pushforward t = 1 + xi1 + 2 sqrt(xi2) x of a
    Bernstein-Szego measure with alpha = xi1/sqrt(xi2); that requires
    |alpha| < 1, checked here.
    """
    if not xi2 > 0.0:
        raise ValueError("xi2 must be positive")
    if not abs(xi1) < math.sqrt(xi2):
        raise ValueError("requires |xi1| < sqrt(xi2) so the weight stays positive")
    b = 2.0 * math.sqrt(xi2)
    return LimitMeasure(
        "godsil-mohar", (float(xi1), float(xi2)), (1.0 + xi1 - b, 1.0 + xi1 + b)
    )


def bernstein_szego_measure(gamma: float, alpha: float, beta: float) -> LimitMeasure:
    """Semicircle weight over a positive quadratic, normalized to mass one.

    Mass one forces gamma^2 (1 - beta) = 1; construction rejects parameters
    violating it.
    """
    poly.bernstein_szego_recurrence(gamma, alpha, beta)  # positivity checks
    if abs(gamma * gamma * (1.0 - beta) - 1.0) > 1e-9:
        raise ValueError("not a probability measure: need gamma^2 (1 - beta) = 1")
    return LimitMeasure("bernstein-szego", (float(gamma), float(alpha), float(beta)), (-1.0, 1.0))


def density(measure: LimitMeasure, x):
    return measure.density(x)


def cdf(measure: LimitMeasure, x: float) -> float:
    return measure.cdf(x)


def moment(measure: LimitMeasure, k: int) -> float:
    """k-th moment via the measure's own Gauss rule (exact for polynomials)."""
    if not 0 <= k <= 40:
        raise ValueError("k must be in 0..40")
    rule = poly.gauss_jacobi(measure.recurrence(), k + 2)
    return float(np.sum(rule.weights * rule.nodes**k))


def ks_distance_empirical(spectrum: EmpiricalSpectrum, measure: LimitMeasure) -> float:
    """Exact sup distance between a step CDF and a continuous CDF.

    For each distinct eigenvalue the step attains both one-sided levels, so
    the supremum is the larger of the two gaps there; ties are grouped.
    """
    vals, counts = np.unique(spectrum.eigenvalues, return_counts=True)
    cum = np.cumsum(counts) / spectrum.n
    prev = cum - counts / spectrum.n
    F = measure.cdf_many(vals)
    return float(max(np.max(np.abs(cum - F)), np.max(np.abs(prev - F))))


def ks_distance_measures(a: LimitMeasure, b: LimitMeasure, grid: int = 4096) -> float:
    """Sup CDF distance between two continuous measures, to about 1e-5.

    Uniform grid over the union of supports (support endpoints included),
    then repeated local refinement around the maximizer.
    """
    if grid < 1000:
        raise ValueError("grid must be >= 1000")
    lo = min(a.support[0], b.support[0])
    hi = max(a.support[1], b.support[1])
    pts = np.unique(
        np.concatenate(
            [np.linspace(lo, hi, grid), np.array(a.support), np.array(b.support)]
        )
    )

    def gaps(xs):
        return np.abs(a.cdf_many(xs) - b.cdf_many(xs))

    d = gaps(pts)
    i = int(np.argmax(d))
    best = float(d[i])
    left = pts[max(i - 1, 0)]
    right = pts[min(i + 1, len(pts) - 1)]
    for _ in range(4):
        sub = np.linspace(left, right, 65)
        ds = gaps(sub)
        j = int(np.argmax(ds))
        best = max(best, float(ds[j]))
        left = sub[max(j - 1, 0)]
        right = sub[min(j + 1, len(sub) - 1)]
    return best


# -- internals -------------------------------------------------------------


def _adaptive_simpson_batch(f, a: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray:
    """Adaptive Simpson over many segments at once.

    Carries the full work queue as arrays so the integrand is only ever
    called on vectors; intervals that meet the local error test deposit
    their Richardson-extrapolated value into their segment's slot, the rest
    are split with halved tolerance.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    out = np.zeros(len(a))
    active = b > a
    seg = np.flatnonzero(active)
    if seg.size == 0:
        return out
    lo, hi = a[seg], b[seg]
    mid = 0.5 * (lo + hi)
    f_lo, f_mid, f_hi = f(lo), f(mid), f(hi)
    whole = (hi - lo) / 6.0 * (f_lo + 4.0 * f_mid + f_hi)
    tols = np.full(seg.shape, tol)
    depth = np.zeros(seg.shape, dtype=np.int64)
    while seg.size:
        mid = 0.5 * (lo + hi)
        lm = 0.5 * (lo + mid)
        rm = 0.5 * (mid + hi)
        f_lm, f_rm = f(lm), f(rm)
        left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lm + f_mid)
        right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_rm + f_hi)
        delta = left + right - whole
        done = (np.abs(delta) <= 15.0 * tols) | (depth >= _MAX_DEPTH)
        bad = done & (depth >= _MAX_DEPTH) & (np.abs(delta) > 1e6 * tols)
        if np.any(bad):
            raise NumericError("adaptive Simpson failed to converge")
        np.add.at(out, seg[done], (left + right + delta / 15.0)[done])
        cont = ~done
        seg = np.concatenate([seg[cont], seg[cont]])
        lo, hi = (
            np.concatenate([lo[cont], mid[cont]]),
            np.concatenate([mid[cont], hi[cont]]),
        )
        f_lo, f_hi = (
            np.concatenate([f_lo[cont], f_mid[cont]]),
            np.concatenate([f_mid[cont], f_hi[cont]]),
        )
        f_mid = np.concatenate([f_lm[cont], f_rm[cont]])
        whole = np.concatenate([left[cont], right[cont]])
        tols = np.concatenate([tols[cont], tols[cont]]) / 2.0
        depth = np.concatenate([depth[cont], depth[cont]]) + 1
    return out


@lru_cache(maxsize=256)
def _density_max(measure: LimitMeasure) -> float:
    lo, hi = measure.support
    if measure.kind == "wigner":
        return 2.0 / math.pi
    if measure.kind in ("marchenko-pastur", "marchenko-pastur-scaled") and measure.params[0] == 1.0:
        return math.inf  # hard-edge singularity
    xs = np.linspace(lo, hi, 10_001)
    vals = measure.density(xs)
    i = int(np.argmax(vals))
    left = xs[max(i - 1, 0)]
    right = xs[min(i + 1, len(xs) - 1)]
    best = float(vals[i])
    for _ in range(3):
        sub = np.linspace(left, right, 65)
        ds = measure.density(sub)
        j = int(np.argmax(ds))
        best = max(best, float(ds[j]))
        left = sub[max(j - 1, 0)]
        right = sub[min(j + 1, len(sub) - 1)]
    return best
