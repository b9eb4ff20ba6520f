"""Kolmogorov-distance stability certificates and their proof toolkit.

The certificate bound is the explicit expression

    2 b_{m-1} + (1 + m^4 b_{m-1}^2 B_m^4) sqrt(sum_k eps_k^2)

in terms of the Christoffel maximum b_{m-1} and the sup norm B_m of the
family on [-1, 1]; the absorbed-constant form is deliberately avoided since
it is untestable.  The sandwich polynomials R and S that drive the proof
are exposed as data for verification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as ncheb

from . import poly, spectra
from .ensembles import derive_seed, rect_sign_matrix, covariance, wigner_matrix
from .errors import NumericError
from .measures import EmpiricalSpectrum, LimitMeasure, ks_distance_empirical

__all__ = [
    "CmsCertificate",
    "CertifyResult",
    "MarkovStieltjesPolys",
    "TailResult",
    "cms_bound",
    "epsilons_from_spectrum",
    "certify",
    "markov_stieltjes_polys",
    "tail_experiment",
]

_MAX_MS_ORDER = 40
_MAX_TRIALS = 10_000


@dataclass(frozen=True)
class CmsCertificate:
    family: poly.ThreeTermRecurrence
    m: int
    epsilons: tuple[float, ...]
    b_prev: float
    sup_B: float
    bound: float


@dataclass(frozen=True)
class CertifyResult:
    bound: float
    actual: float
    certificate: CmsCertificate


@dataclass(frozen=True)
class MarkovStieltjesPolys:
    """The sandwich polynomials R, S and the Lagrange basis ell.

    Stored as numpy Chebyshev series: the monomial basis cannot represent
    bounded polynomials of degree ~40 on [-1, 1] to the required accuracy,
    while Clenshaw evaluation of a Chebyshev series is stable.  Call the
    objects to evaluate; `.coef` holds the coefficients.
    """

    R: np.polynomial.Chebyshev
    S: np.polynomial.Chebyshev
    ell: np.polynomial.Chebyshev


@dataclass(frozen=True)
class TailResult:
    exceed_count: int
    trace_quantiles: tuple[float, ...]
    traces: tuple[float, ...]
    extremes: tuple[tuple[float, float], ...]


def cms_bound(
    family: poly.ThreeTermRecurrence, m: int, epsilons
) -> CmsCertificate:
    """Distance certificate for any probability measure whose first 2m-2
    moments against the family are small.

    With all epsilons zero the bound collapses to 2 b_{m-1}; it is monotone
    in every epsilon and in b, B.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    if not family.is_canonical:
        raise ValueError("certificate families must live on [-1, 1]; use canonical_form()")
    eps = tuple(float(e) for e in epsilons)
    if len(eps) != 2 * m - 2:
        raise ValueError(f"need 2m-2 = {2 * m - 2} epsilons, got {len(eps)}")
    if any(e < 0.0 for e in eps):
        raise ValueError("epsilons must be nonnegative")
    b_prev = poly.max_christoffel_b(family, m - 1)
    sup_B = poly.sup_norm_B(family, m)
    bound = 2.0 * b_prev + (1.0 + m**4 * b_prev**2 * sup_B**4) * math.sqrt(
        sum(e * e for e in eps)
    )
    return CmsCertificate(
        family=family, m=m, epsilons=eps, b_prev=b_prev, sup_B=sup_B, bound=bound
    )


def epsilons_from_spectrum(
    family: poly.ThreeTermRecurrence, spectrum: EmpiricalSpectrum, m: int
) -> list[float]:
    """eps_k = |sum_i P_k(lambda_i)| / n for k = 1 .. 2m-2.

    Eigenvalues slightly outside [-1, 1] are allowed (finite-size spillover)
    and inflate the epsilons honestly through the actual P_k values.
    """
    lam = spectrum.eigenvalues
    if np.max(np.abs(lam)) > 1.5:
        raise ValueError("spectrum must lie within [-1.5, 1.5]; rescale first")
    table = poly.poly_eval_table(family, 2 * m - 2, lam)
    sums = np.abs(table.sum(axis=1)) / spectrum.n
    return [float(sums[k]) for k in range(1, 2 * m - 1)]


def certify(
    family: poly.ThreeTermRecurrence,
    measure: LimitMeasure,
    M: np.ndarray,
    m: int,
) -> CertifyResult:
    """Certificate bound and measured Kolmogorov distance for one matrix.

    The matrix spectrum must already be rescaled to the canonical support.
    Whenever every eigenvalue lies in [-1, 1] the bound dominates the
    measured distance.
    """
    if abs(measure.support[0] + 1.0) > 1e-9 or abs(measure.support[1] - 1.0) > 1e-9:
        raise ValueError("certify expects a measure on [-1, 1]")
    spectrum = spectra.empirical(M)
    eps = epsilons_from_spectrum(family, spectrum, m)
    cert = cms_bound(family, m, eps)
    actual = ks_distance_empirical(spectrum, measure)
    return CertifyResult(bound=cert.bound, actual=actual, certificate=cert)


# -- sandwich polynomials ----------------------------------------------------


def _sandwich_poly(kappa: np.ndarray, s: int, step_at: int) -> np.polynomial.Chebyshev:
    """Degree <= 2m-2 polynomial with value 1 at the first `step_at` zeros,
    0 at the rest, and vanishing derivative everywhere except zero s.

    The Hermite conditions are solved directly in the Chebyshev basis (the
    Chebyshev-Vandermonde system with derivative rows stays well enough
    conditioned through m = 40) with two steps of iterative refinement; a
    Newton divided-difference tableau loses all accuracy beyond m ~ 12.
    """
    m = len(kappa)
    deg = 2 * m - 2
    V = ncheb.chebvander(kappa, deg)
    D = np.zeros((deg + 1, deg + 1))
    for j in range(1, deg + 1):
        ej = np.zeros(deg + 1)
        ej[j] = 1.0
        D[: deg, j] = ncheb.chebder(ej)
    dV = V @ D
    values = np.array([1.0 if t <= step_at else 0.0 for t in range(1, m + 1)])
    keep = [t for t in range(m) if t != s - 1]
    A = np.vstack([V, dV[keep]])
    b = np.concatenate([values, np.zeros(len(keep))])
    coeffs = np.linalg.solve(A, b)
    for _ in range(2):
        coeffs = coeffs + np.linalg.solve(A, b - A @ coeffs)
    return np.polynomial.Chebyshev(coeffs, domain=[-1.0, 1.0])


def markov_stieltjes_polys(
    family: poly.ThreeTermRecurrence, m: int, s: int
) -> MarkovStieltjesPolys:
    """Hermite interpolants R >= indicator(-inf, kappa_s] >= S and the
    Lagrange basis polynomial ell at the zeros of P_m.

    R - S equals ell^2; interpolation residuals are verified to 1e-7 and a
    conditioning failure raises NumericError.
    """
    if not 2 <= m <= _MAX_MS_ORDER:
        raise ValueError(f"m must be in 2..{_MAX_MS_ORDER}")
    if not 1 <= s <= m:
        raise ValueError("s must be in 1..m")
    kappa = poly.jacobi_zeros(family, m)
    R = _sandwich_poly(kappa, s, step_at=s)
    S = _sandwich_poly(kappa, s, step_at=s - 1)
    others = np.delete(kappa, s - 1)
    ell_coeffs = ncheb.chebfromroots(others) / np.prod(kappa[s - 1] - others)
    ell = np.polynomial.Chebyshev(ell_coeffs, domain=[-1.0, 1.0])

    dR, dS = R.deriv(), S.deriv()
    resid = 0.0
    for t in range(1, m + 1):
        x = kappa[t - 1]
        resid = max(resid, abs(R(x) - (1.0 if t <= s else 0.0)))
        resid = max(resid, abs(S(x) - (1.0 if t <= s - 1 else 0.0)))
        if t != s:
            resid = max(resid, abs(dR(x)), abs(dS(x)))
    if resid > 1e-7:
        cond = max(np.max(np.abs(R.coef)), np.max(np.abs(S.coef)))
        raise NumericError(
            f"sandwich interpolation residual {resid:.3e} exceeds 1e-7 "
            f"(coefficient magnitude {cond:.3e} suggests ill-conditioning)"
        )
    return MarkovStieltjesPolys(R=R, S=S, ell=ell)


# -- tail experiments --------------------------------------------------------


def tail_experiment(
    kind: str,
    n: int,
    k: int,
    eps: float,
    trials: int,
    seed: int,
    N: int | None = None,
) -> TailResult:
    """Count extreme-eigenvalue events and record the polynomial trace
    statistic driving the Chebyshev-inequality mechanism.

    kind "wigner": events are ||A|| >= 1 + eps; the trace statistic is the
    degree-k family sum at the eigenvalues of the +-1 sign part of A.
    kind "covariance": events are eigenvalues of C = B B^t escaping the
    eps-inflated limiting support; the statistic uses the covariance-walk
    family at the eigenvalues of C.
    """
    if trials < 1 or trials > _MAX_TRIALS:
        raise ValueError(f"trials must be in 1..{_MAX_TRIALS}")
    if k < 2 or k % 2 != 0:
        raise ValueError("k must be an even integer >= 2")
    traces = []
    extremes = []
    exceed = 0
    if kind == "wigner":
        rec = poly.kesten_mckay_recurrence(n - 1)
        for t in range(trials):
            A = wigner_matrix(n, derive_seed(seed, t))
            lam = spectra.sym_eigenvalues(A)
            extremes.append((float(lam[0]), float(lam[-1])))
            if max(abs(lam[0]), abs(lam[-1])) >= 1.0 + eps:
                exceed += 1
            S = np.sign(A - np.diag(np.diag(A)))
            lam_s = spectra.sym_eigenvalues(S)
            traces.append(float(np.sum(poly.poly_eval(rec, k, lam_s))))
    elif kind == "covariance":
        if N is None or N < n:
            raise ValueError("covariance experiments need N >= n")
        xi = n / N
        lo = (1.0 - math.sqrt(xi)) ** 2
        hi = (1.0 + math.sqrt(xi)) ** 2
        rec = poly.marchenko_pastur_q_recurrence(
            (n - 2) / N, (n - 1) * (N - 1) / N**2
        )
        for t in range(trials):
            B = rect_sign_matrix(n, N, derive_seed(seed, t))
            lam = spectra.sym_eigenvalues(covariance(B))
            extremes.append((float(lam[0]), float(lam[-1])))
            if lam[0] < lo - eps or lam[-1] > hi + eps:
                exceed += 1
            traces.append(float(np.sum(poly.poly_eval(rec, k, lam))))
    else:
        raise ValueError(f"unknown ensemble kind {kind!r}")
    quantiles = tuple(
        float(q) for q in np.quantile(np.array(traces), [0.0, 0.25, 0.5, 0.75, 1.0])
    )
    return TailResult(
        exceed_count=exceed,
        trace_quantiles=quantiles,
        traces=tuple(traces),
        extremes=tuple(extremes),
    )
