import math

import numpy as np
import pytest
from scipy.integrate import quad

from spectral_walks import measures, poly

ALL_MEASURES = [
    measures.wigner_measure(),
    measures.kesten_mckay_measure(3),
    measures.kesten_mckay_measure(10),
    measures.kesten_mckay_scaled_measure(3),
    measures.marchenko_pastur_measure(0.5),
    measures.marchenko_pastur_measure(1.0),
    measures.marchenko_pastur_scaled_measure(0.25),
    measures.godsil_mohar_measure(0.4, 0.5),
    measures.bernstein_szego_measure(math.sqrt(2.0 / 3.0), 0.0, -0.5),
]


class TestDensity:
    def test_wigner_values(self):
        w = measures.wigner_measure()
        assert w.density(0.0) == pytest.approx(2.0 / math.pi, abs=1e-14)
        assert w.density(2.0) == 0.0

    def test_km3_at_zero(self):
        km = measures.kesten_mckay_measure(3)
        assert km.density(0.0) == pytest.approx(math.sqrt(8) / (6 * math.pi), abs=1e-14)

    def test_mp_support_and_hard_edge(self):
        mp = measures.marchenko_pastur_measure(1.0)
        assert mp.density(4.0) == pytest.approx(0.0, abs=1e-14)
        assert mp.density(4.5) == 0.0
        x = 1e-8
        expected = math.sqrt(x * (4.0 - x)) / (2 * math.pi * x)
        assert mp.density(x) == pytest.approx(expected, rel=1e-10)

    def test_nonnegative_inside_zero_outside(self):
        for m in ALL_MEASURES:
            lo, hi = m.support
            xs = np.linspace(lo, hi, 501)[1:-1]
            assert np.all(m.density(xs) >= 0)
            assert m.density(lo - 0.7) == 0.0
            assert m.density(hi + 0.7) == 0.0

    def test_gm_equals_pushforward_of_short_combination(self):
        xi1, xi2 = 0.4, 0.5
        gm = measures.godsil_mohar_measure(xi1, xi2)
        alpha = xi1 / math.sqrt(xi2)
        bsz = measures.LimitMeasure("bernstein-szego", (1.0, alpha, 0.0), (-1.0, 1.0))
        s = 2.0 * math.sqrt(xi2)
        ts = np.linspace(gm.support[0] + 1e-4, gm.support[1] - 1e-4, 401)
        xs = (ts - 1.0 - xi1) / s
        np.testing.assert_allclose(gm.density(ts), bsz.density(xs) / s, rtol=1e-9)

    def test_gm_support_formula(self):
        xi1, xi2 = 0.4, 0.5
        gm = measures.godsil_mohar_measure(xi1, xi2)
        assert gm.support[0] == pytest.approx(1 - 2 * math.sqrt(xi2) + xi1)
        assert gm.support[1] == pytest.approx(1 + 2 * math.sqrt(xi2) + xi1)

    def test_bsz_requires_probability_normalization(self):
        with pytest.raises(ValueError):
            measures.bernstein_szego_measure(1.0, 0.0, -0.5)

    def test_gm_requires_positive_weight(self):
        with pytest.raises(ValueError):
            measures.godsil_mohar_measure(1.0, 0.5)


class TestCdf:
    def test_wigner_median(self):
        assert measures.wigner_measure().cdf(0.0) == pytest.approx(0.5, abs=1e-14)

    def test_outside_support(self):
        for m in ALL_MEASURES:
            lo, hi = m.support
            assert m.cdf(lo - 1.0) == 0.0
            assert m.cdf(hi + 1.0) == 1.0

    def test_km_scaled_symmetry(self):
        assert measures.kesten_mckay_scaled_measure(3).cdf(0.0) == pytest.approx(0.5, abs=1e-9)

    def test_total_mass_one(self):
        for m in ALL_MEASURES:
            lo, hi = m.support
            just_inside = hi - 1e-12 * (hi - lo)
            assert m.cdf(just_inside) == pytest.approx(1.0, abs=1e-9)
            assert m.cdf(lo) == pytest.approx(0.0, abs=1e-12)

    def test_monotone(self):
        for m in ALL_MEASURES:
            xs = np.linspace(m.support[0] - 0.1, m.support[1] + 0.1, 200)
            vals = m.cdf_many(xs)
            assert np.all(np.diff(vals) >= -1e-12)

    @pytest.mark.parametrize(
        "m",
        [
            measures.kesten_mckay_measure(3),
            measures.marchenko_pastur_measure(0.5),
            measures.godsil_mohar_measure(0.4, 0.5),
            measures.marchenko_pastur_scaled_measure(0.25),
        ],
    )
    def test_against_independent_quadrature(self, m):
        lo, hi = m.support
        for x in np.linspace(lo, hi, 7)[1:-1]:
            oracle, err = quad(lambda t: m.density(t), lo, x, limit=300)
            assert err < 1e-7
            assert m.cdf(x) == pytest.approx(oracle, abs=1e-7)

    def test_hard_edge_cdf_against_quadrature(self):
        mp = measures.marchenko_pastur_measure(1.0)
        for x in (0.01, 0.5, 2.0, 3.9):
            oracle, _ = quad(
                lambda u: 2 * u * mp.density(u * u), 0.0, math.sqrt(x), limit=300
            )
            assert mp.cdf(x) == pytest.approx(oracle, abs=1e-8)

    def test_cdf_many_matches_pointwise(self):
        m = measures.kesten_mckay_measure(4)
        xs = np.array([-3.0, -1.2, 0.0, 0.5, 2.9])
        many = m.cdf_many(xs)
        single = np.array([m.cdf(x) for x in xs])
        np.testing.assert_allclose(many, single, atol=1e-10)

    def test_cdf_many_unsorted_input(self):
        m = measures.wigner_measure()
        xs = np.array([0.5, -0.5, 0.0])
        np.testing.assert_allclose(
            m.cdf_many(xs), [m.cdf(0.5), m.cdf(-0.5), m.cdf(0.0)], atol=1e-12
        )


class TestMoments:
    def test_wigner_first_moments(self):
        w = measures.wigner_measure()
        assert measures.moment(w, 0) == pytest.approx(1.0, abs=1e-12)
        assert measures.moment(w, 1) == pytest.approx(0.0, abs=1e-12)
        assert measures.moment(w, 2) == pytest.approx(0.25, abs=1e-12)

    def test_against_quadrature(self):
        km = measures.kesten_mckay_measure(3)
        for k in (2, 4, 6):
            oracle, _ = quad(lambda t: t**k * km.density(t), *km.support, limit=300)
            assert measures.moment(km, k) == pytest.approx(oracle, abs=1e-8)

    def test_mp_mean(self):
        mp = measures.marchenko_pastur_measure(0.5)
        assert measures.moment(mp, 1) == pytest.approx(1.0, abs=1e-10)


class TestKsEmpirical:
    def test_single_atom_at_median(self):
        e = measures.EmpiricalSpectrum.from_values([0.0])
        assert measures.ks_distance_empirical(e, measures.wigner_measure()) == pytest.approx(0.5)

    def test_two_quantile_atoms(self):
        w = measures.wigner_measure()
        # invert the CDF at 1/4 and 3/4 by bisection
        def inv(p):
            a, b = -1.0, 1.0
            for _ in range(80):
                mid = 0.5 * (a + b)
                if w.cdf(mid) < p:
                    a = mid
                else:
                    b = mid
            return 0.5 * (a + b)

        e = measures.EmpiricalSpectrum.from_values([inv(0.25), inv(0.75)])
        assert measures.ks_distance_empirical(e, w) == pytest.approx(0.25, abs=1e-9)

    def test_petersen_vs_km_scaled(self):
        lam = np.array([-2.0] * 4 + [1.0] * 5 + [3.0]) / (2 * math.sqrt(2))
        e = measures.EmpiricalSpectrum.from_values(lam)
        km = measures.kesten_mckay_scaled_measure(3)
        d = measures.ks_distance_empirical(e, km)
        assert 0.0 < d < 0.3
        # brute-force grid supremum; the oracle CDF is a vectorized composite
        # Simpson pass, independent of the adaptive recursion inside cdf_many
        grid = np.linspace(-1.3, 1.3, 10**6 + 1)
        mids = 0.5 * (grid[:-1] + grid[1:])
        h = grid[1] - grid[0]
        panels = h / 6.0 * (
            km.density(grid[:-1]) + 4.0 * km.density(mids) + km.density(grid[1:])
        )
        F = np.concatenate([[0.0], np.cumsum(panels)])
        emp = np.searchsorted(np.sort(lam), grid, side="right") / len(lam)
        assert d == pytest.approx(float(np.max(np.abs(emp - F))), abs=1e-6)

    def test_tie_grouping(self):
        e = measures.EmpiricalSpectrum.from_values([0.0, 0.0, 0.0, 0.5])
        w = measures.wigner_measure()
        # step jumps from 0 to 3/4 at 0.0 where F = 1/2
        assert measures.ks_distance_empirical(e, w) == pytest.approx(0.5, abs=1e-12)

    def test_affine_invariance(self):
        rng = np.random.default_rng(11)
        hw = 2 * math.sqrt(2)
        lam = rng.uniform(-hw, hw, 40)
        e = measures.EmpiricalSpectrum.from_values(lam)
        d_full = measures.ks_distance_empirical(e, measures.kesten_mckay_measure(3))
        d_scaled = measures.ks_distance_empirical(
            e.rescaled(0.0, hw), measures.kesten_mckay_scaled_measure(3)
        )
        assert d_full == pytest.approx(d_scaled, abs=2e-6)

    def test_validation(self):
        with pytest.raises(ValueError):
            measures.EmpiricalSpectrum.from_values([])
        with pytest.raises(ValueError):
            measures.EmpiricalSpectrum.from_values([np.nan])


class TestKsMeasures:
    def test_self_distance_zero(self):
        w = measures.wigner_measure()
        assert measures.ks_distance_measures(w, w) == pytest.approx(0.0, abs=1e-12)

    def test_km_scaled_vs_wigner_bound_d10(self):
        d = 10
        val = measures.ks_distance_measures(
            measures.kesten_mckay_scaled_measure(d), measures.wigner_measure()
        )
        assert val <= 3 * d / (d - 2) ** 2
        # total-variation integral dominates the sup distance
        tv, _ = quad(
            lambda x: abs(
                measures.kesten_mckay_scaled_measure(d).density(x)
                - measures.wigner_measure().density(x)
            ),
            -1.0,
            1.0,
            limit=300,
        )
        assert val <= tv + 1e-7
        assert tv <= 3 * d / (d - 2) ** 2

    def test_km_scaled_vs_wigner_decreasing(self):
        w = measures.wigner_measure()
        vals = [
            measures.ks_distance_measures(measures.kesten_mckay_scaled_measure(d), w)
            for d in (3, 6, 12, 24, 48)
        ]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert vals[-1] <= 5 / 48

    def test_grid_guard(self):
        w = measures.wigner_measure()
        with pytest.raises(ValueError):
            measures.ks_distance_measures(w, w, grid=100)

    def test_mp_scaled_pushforward_matches_mp(self):
        xi = 0.5
        scaled = measures.marchenko_pastur_scaled_measure(xi)
        mp = measures.marchenko_pastur_measure(xi)
        xs = np.linspace(-1, 1, 41)
        ts = 1.0 + xi + 2.0 * math.sqrt(xi) * xs
        np.testing.assert_allclose(scaled.cdf_many(xs), mp.cdf_many(ts), atol=1e-8)

    def test_gm_close_to_mp_when_parameters_close(self):
        xi = 0.5
        mp = measures.marchenko_pastur_measure(xi)
        for xi1, xi2 in [(0.5, 0.52), (0.48, 0.5), (0.45, 0.55)]:
            gm = measures.godsil_mohar_measure(xi1, xi2)
            d = measures.ks_distance_measures(gm, mp, grid=2000)
            assert d <= 5 * abs(xi1 - xi) + 5 * abs(xi2 - xi)


class TestDensityMax:
    def test_wigner(self):
        assert measures.wigner_measure().density_max() == pytest.approx(2 / math.pi)

    def test_hard_edge_unbounded(self):
        assert measures.marchenko_pastur_measure(1.0).density_max() == math.inf

    def test_km_scaled_matches_grid(self):
        m = measures.kesten_mckay_scaled_measure(3)
        xs = np.linspace(-1, 1, 200001)
        assert m.density_max() == pytest.approx(float(np.max(m.density(xs))), rel=1e-6)
