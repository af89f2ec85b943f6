"""Density of states grids, integrated DOS, decay check, limit-measure evaluator."""

import numpy as np
import pytest

from latstats.dos import (
    LimitMeasureSpec,
    dos_1d,
    dos_grid,
    fourier_decay_check,
    ids,
    limit_comparison_table,
    limit_measure_integral,
)
from latstats.measures import free_measure
from latstats.testfunctions import Bump


class TestDos1d:
    def test_center_value(self):
        assert dos_1d(0.0) == pytest.approx(1.0 / (2 * np.pi), rel=1e-15)

    def test_domain_error(self):
        for e in (2.0, -2.0, 2.5):
            with pytest.raises(ValueError):
                dos_1d(e)

    def test_even(self):
        assert dos_1d(1.3) == dos_1d(-1.3)


class TestDosGrid:
    def test_r1_matches_closed_form_pointwise(self):
        g = dos_grid(1)
        sel = np.abs(g.energies) <= 1.9
        exact = 1.0 / (np.pi * np.sqrt(4.0 - g.energies[sel] ** 2))
        assert np.abs(g.values[sel] - exact).max() <= 1e-8

    @pytest.mark.parametrize("r", [1, 2, 3, 4])
    def test_normalization_and_symmetry(self, r):
        g = dos_grid(r)
        assert abs(g.trapz_mass() - 1.0) <= 1e-6
        assert np.abs(g.values - g.values[::-1]).max() <= 1e-8
        assert np.all(g.values >= 0.0)

    def test_r2_log_peak_grows_with_refinement(self):
        coarse = dos_grid(2, 2001)
        fine = dos_grid(2, 8001)
        mid_c = coarse.values[len(coarse.values) // 2]
        mid_f = fine.values[len(fine.values) // 2]
        assert mid_f > mid_c
        assert abs(fine.trapz_mass() - 1.0) <= 1e-6

    def test_r2_monte_carlo_cdf(self):
        g = dos_grid(2)
        rng = np.random.default_rng(10)
        n = 4 * 10**6
        s = 2 * np.cos(rng.uniform(0, np.pi, n)) + 2 * np.cos(rng.uniform(0, np.pi, n))
        for x in (-1.0, 0.5, 2.5):
            mc = float((s <= x).mean())
            assert g.integrate(-4.0, x) == pytest.approx(mc, abs=5 * np.sqrt(0.25 / n) + 2e-4)

    def test_grid_size_validation(self):
        with pytest.raises(ValueError):
            dos_grid(1, 100)
        with pytest.raises(ValueError):
            dos_grid(1, 2000)  # even
        with pytest.raises(ValueError):
            dos_grid(0)


class TestIds:
    def test_full_mass(self):
        assert ids(1, -2.0, 2.0) == pytest.approx(1.0, abs=1e-6)

    def test_half_mass_by_symmetry(self):
        assert ids(1, 0.0, 2.0) == pytest.approx(0.5, abs=1e-6)

    def test_r2_half(self):
        assert ids(2, -4.0, 0.0) == pytest.approx(0.5, abs=1e-5)

    def test_clipping(self):
        assert ids(1, -10.0, 10.0) == pytest.approx(1.0, abs=1e-6)

    def test_needs_ordered_interval(self):
        with pytest.raises(ValueError):
            ids(1, 1.0, 0.0)

    def test_consistency_with_finite_volume(self):
        # sup-distance of CDFs: N_3(-6, x) vs the fraction of closed-form
        # Delta_L eigenvalues below x, at L=6
        L = 6
        al = free_measure(3, L, 0.0, 4 * 3 * (L + 1))
        mult = np.rint(al.weights * (2 * L + 1) ** 2).astype(int)
        lam = np.sort(np.repeat(al.positions / (L + 1.0), mult))
        xs = np.linspace(-5.9, 5.9, 401)
        frac = np.searchsorted(lam, xs, side="right") / len(lam)
        grid_cdf = np.array([ids(3, -6.0001, x) for x in xs])
        assert np.abs(frac - grid_cdf).max() <= 0.02


class TestFourierDecay:
    def test_unit_at_zero(self):
        from scipy.special import j0

        assert j0(0.0) ** 3 == 1.0

    def test_r1_amplitude_bound(self):
        res = fourier_decay_check(1)
        assert res.sup_weighted <= 1.0
        # Bessel asymptotic amplitude sqrt(1/pi) ~ 0.5642
        assert res.sup_weighted == pytest.approx(np.sqrt(1 / np.pi), abs=0.01)

    def test_product_structure(self):
        r1 = fourier_decay_check(1)
        r4 = fourier_decay_check(4)
        assert np.allclose(r4.abs_char, r1.abs_char**4, rtol=1e-12, atol=1e-300)

    @pytest.mark.parametrize("r", [1, 2, 3, 4])
    def test_bounded_and_stable(self, r):
        a = fourier_decay_check(r)
        b = fourier_decay_check(r, np.linspace(10.0, 1000.0, 15841))
        assert np.isfinite(a.sup_weighted)
        assert b.sup_weighted <= 1.0
        assert abs(a.sup_weighted - b.sup_weighted) <= 0.05 * b.sup_weighted


class TestLimitMeasure:
    def test_zero_function(self):
        spec = LimitMeasureSpec(d=4, E=0.0)
        res = limit_measure_integral(spec, Bump(0.0, 1.0, height=0.0))
        assert res.value == 0.0

    def test_reflection_symmetry_exact(self):
        spec = LimitMeasureSpec(d=4, E=0.75)
        f = Bump(0.4, 1.0)
        g = Bump(-0.4, 1.0)  # reflection of f
        a = limit_measure_integral(spec, f)
        b = limit_measure_integral(spec, g)
        assert a.value == b.value

    def test_truncation_soundness(self):
        # enlarging the quadrature order or the k range moves the value by
        # no more than the reported self-convergence figure
        from latstats.dos import _limit_sum, dos_grid as _grid

        spec = LimitMeasureSpec(d=4, E=0.0)
        f = Bump(0.0, 1.0)
        res = limit_measure_integral(spec, f)
        bigger, _, _ = _limit_sum(spec, f, _grid(3), 4 * res.theta_order, 4 * res.k_max)
        assert abs(bigger - res.value) <= res.self_convergence * abs(res.value) + 1e-12

    def test_low_dimension_warns_but_runs(self):
        spec = LimitMeasureSpec(d=3, E=0.0)
        with pytest.warns(RuntimeWarning, match="d >= 4"):
            res = limit_measure_integral(spec, Bump(0.0, 1.0))
        assert np.isfinite(res.value)

    def test_validation(self):
        with pytest.raises(ValueError):
            LimitMeasureSpec(d=1, E=0.0)
        with pytest.raises(ValueError):
            LimitMeasureSpec(d=4, E=9.0)

    def test_comparison_table_shape(self):
        spec = LimitMeasureSpec(d=4, E=0.0)
        rows = limit_comparison_table(spec, Bump(0.0, 1.0), [8, 12])
        assert [r[0] for r in rows] == ["8", "12", "limit"]
        assert all(np.isfinite(r[1]) for r in rows)
