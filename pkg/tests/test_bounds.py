import math

import numpy as np
import pytest
from scipy.integrate import quad

from spectral_walks import bounds, graphs, measures, poly, spectra
from spectral_walks.ensembles import derive_seed, wigner_matrix
from spectral_walks.errors import NumericError


def exkm(d):
    return poly.canonical_form(poly.kesten_mckay_recurrence(d))


class TestCmsBound:
    def test_zero_epsilons_collapse(self):
        rec = poly.chebyshev_u_recurrence()
        cert = bounds.cms_bound(rec, 10, [0.0] * 18)
        assert cert.bound == 2.0 * poly.max_christoffel_b(rec, 9)

    def test_monotone_in_epsilons(self):
        rec = poly.chebyshev_u_recurrence()
        base = bounds.cms_bound(rec, 5, [0.0] * 8).bound
        tiny = bounds.cms_bound(rec, 5, [1e-6] * 8).bound
        bigger = bounds.cms_bound(rec, 5, [1e-3] * 8).bound
        assert base <= tiny <= bigger

    def test_formula_is_exact(self):
        rec = exkm(3)
        eps = [0.01, 0.02, 0.0, 0.005]
        cert = bounds.cms_bound(rec, 3, eps)
        b, B = cert.b_prev, cert.sup_B
        expected = 2 * b + (1 + 3**4 * b**2 * B**4) * math.sqrt(sum(e * e for e in eps))
        assert cert.bound == pytest.approx(expected, rel=1e-15)

    def test_km_family_small_bound_at_m20(self):
        # the swept Christoffel ceiling controls the zero-epsilon bound
        rec = exkm(3)
        cert = bounds.cms_bound(rec, 20, [0.0] * 38)
        sweep = [(k + 1) * poly.max_christoffel_b(rec, k) for k in range(1, 65)]
        C = max(sweep)
        assert max(k * poly.max_christoffel_b(rec, k) for k in range(1, 41)) <= 2.0
        assert cert.bound <= 2.0 * C / 20.0

    def test_validation(self):
        rec = poly.chebyshev_u_recurrence()
        with pytest.raises(ValueError):
            bounds.cms_bound(rec, 5, [0.0] * 7)
        with pytest.raises(ValueError):
            bounds.cms_bound(rec, 5, [-0.1] + [0.0] * 7)
        with pytest.raises(ValueError):
            bounds.cms_bound(poly.kesten_mckay_recurrence(3), 5, [0.0] * 8)


class TestEpsilons:
    def test_petersen_vanishing(self):
        A = graphs.adjacency_matrix(graphs.petersen()) / (2 * math.sqrt(2))
        eps = bounds.epsilons_from_spectrum(exkm(3), spectra.empirical(A), 3)
        assert len(eps) == 4
        np.testing.assert_allclose(eps, 0.0, atol=1e-9)

    def test_atoms_at_p1_zero(self):
        rec = poly.chebyshev_u_recurrence()
        zero = poly.jacobi_zeros(rec, 1)[0]
        e = measures.EmpiricalSpectrum.from_values([zero] * 6)
        eps = bounds.epsilons_from_spectrum(rec, e, 4)
        assert eps[0] == pytest.approx(0.0, abs=1e-12)

    def test_wigner_epsilon_trend_and_dominance(self):
        n, m = 500, 20
        rec = poly.chebyshev_u_recurrence()
        target = measures.wigner_measure()
        for t in range(3):
            A = wigner_matrix(n, derive_seed(2024, t))
            spec = spectra.empirical(A)
            eps = bounds.epsilons_from_spectrum(rec, spec, m)
            for k, e in enumerate(eps, start=1):
                assert e <= 40.0 * k / n
            res = bounds.certify(rec, target, A, m)
            assert res.bound >= res.actual - 1e-9

    def test_rejects_far_out_spectrum(self):
        e = measures.EmpiricalSpectrum.from_values([2.0])
        with pytest.raises(ValueError):
            bounds.epsilons_from_spectrum(poly.chebyshev_u_recurrence(), e, 3)


class TestCertify:
    def test_petersen_bound_is_2b2(self):
        A = graphs.adjacency_matrix(graphs.petersen()) / (2 * math.sqrt(2))
        res = bounds.certify(exkm(3), measures.kesten_mckay_scaled_measure(3), A, 3)
        assert res.bound == pytest.approx(2 * poly.max_christoffel_b(exkm(3), 2), abs=1e-9)
        assert res.actual <= res.bound

    def test_wigner_dominance_monte_carlo(self):
        rec = poly.chebyshev_u_recurrence()
        target = measures.wigner_measure()
        for t in range(20):
            A = wigner_matrix(400, derive_seed(555, t))
            res = bounds.certify(rec, target, A, 15)
            assert res.bound >= res.actual - 1e-9

    def test_degenerate_spectrum_at_zero(self):
        M = np.zeros((40, 40))
        res = bounds.certify(
            poly.chebyshev_u_recurrence(), measures.wigner_measure(), M, 5
        )
        assert res.actual == pytest.approx(0.5, abs=1e-9)
        # U_2(0) = -1 inflates eps_2 to 1, so the certificate stays above 1
        assert res.certificate.epsilons[1] == pytest.approx(1.0, abs=1e-12)
        assert res.bound >= res.actual

    def test_requires_canonical_measure(self):
        with pytest.raises(ValueError):
            bounds.certify(
                exkm(3), measures.kesten_mckay_measure(3), np.zeros((4, 4)), 3
            )


class TestMarkovStieltjes:
    def test_m2_conditions(self):
        rec = poly.chebyshev_u_recurrence()
        kappa = poly.jacobi_zeros(rec, 2)
        ms = bounds.markov_stieltjes_polys(rec, 2, 1)
        assert len(ms.R.coef) - 1 <= 2  # degree <= 2m-2 = 2
        assert ms.R(kappa[0]) == pytest.approx(1.0, abs=1e-9)
        assert ms.R(kappa[1]) == pytest.approx(0.0, abs=1e-9)
        assert ms.R.deriv()(kappa[1]) == pytest.approx(0.0, abs=1e-9)

    def test_integral_difference_is_christoffel_weight(self):
        # independent quadrature of R - S against the Gauss weight at kappa_s
        rec = poly.chebyshev_u_recurrence()
        m, s = 6, 3
        ms = bounds.markov_stieltjes_polys(rec, m, s)
        rule = poly.gauss_jacobi(rec, m)
        w = measures.wigner_measure()
        diff, _ = quad(
            lambda x: (ms.R(x) - ms.S(x)) * w.density(x), -1.0, 1.0, limit=200
        )
        assert diff == pytest.approx(rule.weights[s - 1], abs=1e-9)

    def test_lagrange_sup_bound(self):
        rec = poly.chebyshev_u_recurrence()
        m, s = 10, 5
        ms = bounds.markov_stieltjes_polys(rec, m, s)
        xs = np.linspace(-1, 1, 10_000)
        bound = m**2 * poly.max_christoffel_b(rec, m - 1) * poly.sup_norm_B(rec, m) ** 2
        assert np.max(np.abs(ms.ell(xs))) <= bound

    @pytest.mark.parametrize("rec", [poly.chebyshev_u_recurrence(), exkm(3)])
    @pytest.mark.parametrize("m", [4, 12, 20])
    def test_square_identity_and_sandwich(self, rec, m):
        kappa = poly.jacobi_zeros(rec, m)
        xs = np.linspace(-1, 1, 10_000)
        for s in (1, (m + 1) // 2, m):
            ms = bounds.markov_stieltjes_polys(rec, m, s)
            np.testing.assert_allclose(ms.R(xs) - ms.S(xs), ms.ell(xs) ** 2, atol=1e-6)
            indicator = (xs <= kappa[s - 1]).astype(float)
            assert np.all(ms.R(xs) >= indicator - 1e-7)
            assert np.all(ms.S(xs) <= indicator + 1e-7)

    def test_gauss_sums_vanish_for_own_measure(self):
        # the limiting measure satisfies the epsilon condition with all zeros
        for rec in (poly.chebyshev_u_recurrence(), exkm(5)):
            m = 8
            rule = poly.gauss_jacobi(rec, m)
            table = poly.poly_eval_table(rec, 2 * m - 2, rule.nodes)
            sums = table[1:] @ rule.weights
            np.testing.assert_allclose(sums, 0.0, atol=1e-9)

    def test_order_guards(self):
        rec = poly.chebyshev_u_recurrence()
        with pytest.raises(ValueError):
            bounds.markov_stieltjes_polys(rec, 41, 1)
        with pytest.raises(ValueError):
            bounds.markov_stieltjes_polys(rec, 5, 6)


class TestTailExperiment:
    def test_wigner_degree_two_traces_vanish(self):
        res = bounds.tail_experiment("wigner", 50, 2, 0.5, trials=20, seed=99)
        traces = np.array(res.traces)
        assert np.max(np.abs(traces)) <= 1e-7
        assert traces.mean() >= -1e-7
        assert traces.mean() <= 2.0 * 2

    def test_wigner_no_exceedances_small(self):
        res = bounds.tail_experiment("wigner", 100, 4, 0.3, trials=10, seed=5)
        assert res.exceed_count == 0
        assert len(res.extremes) == 10

    def test_covariance_no_exceedances_small(self):
        res = bounds.tail_experiment("covariance", 60, 4, 0.3, trials=10, seed=6, N=120)
        assert res.exceed_count == 0
        assert len(res.trace_quantiles) == 5
        assert res.trace_quantiles[0] <= res.trace_quantiles[-1]

    def test_guards(self):
        with pytest.raises(ValueError):
            bounds.tail_experiment("wigner", 50, 3, 0.1, trials=5, seed=1)
        with pytest.raises(ValueError):
            bounds.tail_experiment("wigner", 50, 2, 0.1, trials=0, seed=1)
        with pytest.raises(ValueError):
            bounds.tail_experiment("covariance", 50, 2, 0.1, trials=5, seed=1)
        with pytest.raises(ValueError):
            bounds.tail_experiment("laplace", 50, 2, 0.1, trials=5, seed=1)
