import math
from dataclasses import replace

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from tripartite_cv import analysis as an

P = an.EXPERIMENT
R_GRID = np.round(np.arange(0, 2.0001, 0.1), 10)


class TestClosedForms:
    def test_experimental_point(self):
        b = an.closed_form_variances(P)
        assert (b.v_sum, b.v_diff, b.v_sum_helped) == pytest.approx((0.760, 0.479, 0.469), abs=5e-4)

    def test_helped_gap(self):
        b = an.closed_form_variances(P)
        assert b.v_sum - b.v_sum_helped == pytest.approx(0.291, abs=5e-4)

    def test_no_squeezing(self):
        b = an.closed_form_variances(replace(P, r=0.0))
        assert b.v_sum == pytest.approx(1) and b.v_diff == pytest.approx(1)
        # Claire's vacuum still rides on the helped current at fixed gain
        assert b.v_sum_helped == pytest.approx(1 + P.xi2_sq / (2 * P.xi1_sq))
        assert an.variance_vs_gain(replace(P, r=0.0), an.optimal_gain(replace(P, r=0.0))) == pytest.approx(1)

    @pytest.mark.parametrize("r", [0.0, 0.5, 1.3, 2.0])
    def test_ideal_unit_gain_collapses(self, r):
        p = an.ExperimentParams(r=r, xi1_sq=1, xi2_sq=1, eta_sq=1)
        assert an.helped_variance_unit_gain(p) == pytest.approx(1.5 * math.exp(-2 * r), abs=1e-12)
        assert an.closed_form_variances(p).v_sum_helped == pytest.approx(1.5 * math.exp(-2 * r), abs=1e-12)

    @pytest.mark.parametrize("r", R_GRID)
    def test_general_quadratic_reduces_to_unit_gain_form(self, r):
        p = replace(P, r=float(r))
        assert an.variance_vs_gain(p, 1 / math.sqrt(2)) == pytest.approx(an.helped_variance_unit_gain(p), abs=1e-12)

    def test_signal_variances(self):
        b = an.closed_form_variances(replace(P, v_xs=0.2, v_ys=0.4))
        b0 = an.closed_form_variances(P)
        assert b.v_sum - b0.v_sum == pytest.approx(0.1)
        assert b.v_sum_helped - b0.v_sum_helped == pytest.approx(0.1)
        assert b.v_diff - b0.v_diff == pytest.approx(0.2)

    def test_squeezing_in_db(self):
        assert 10 * math.log10(math.exp(-2 * 0.674)) == pytest.approx(-5.85, abs=0.01)

    @pytest.mark.parametrize("r", R_GRID)
    def test_matches_circuit(self, r):
        p = replace(P, r=float(r))
        a, b = an.closed_form_variances(p), an.circuit_variances(p)
        assert (a.v_sum, a.v_diff, a.v_sum_helped) == pytest.approx((b.v_sum, b.v_diff, b.v_sum_helped), abs=1e-9)
        assert an.circuit_variances(p, "squared_xi2").v_sum_helped == pytest.approx(
            an.closed_form_variances(p, "squared_xi2").v_sum_helped, abs=1e-9)

    def test_params_validation(self):
        with pytest.raises(ValueError):
            an.ExperimentParams(r=-1)
        with pytest.raises(ValueError):
            an.ExperimentParams(eta_sq=1.1)
        with pytest.raises(ValueError):
            an.ExperimentParams(sigma_sq=-1)


class TestMonotonicity:
    dense = np.linspace(0, 2, 2001)

    def test_diff_decreasing(self):
        v = [an.diff_variance(replace(P, r=float(r))) for r in self.dense]
        assert np.all(np.diff(v) < 0)

    def test_sum_increasing_past_stationary_point(self):
        r_star = math.log(8) / 4
        assert r_star == pytest.approx(0.52, abs=0.01)
        grid = self.dense[self.dense >= r_star]
        v = [an.sum_variance(replace(P, r=float(r))) for r in grid]
        assert np.all(np.diff(v) > 0)

    def test_helped_decreasing(self):
        v = [an.closed_form_variances(replace(P, r=float(r))).v_sum_helped for r in self.dense]
        assert np.all(np.diff(v) < 0)


class TestOptimalGain:
    def test_zero_squeezing(self):
        assert an.optimal_gain(replace(P, r=0)) == 0

    def test_experimental(self):
        # golden-section minimum of the quadratic as an independent check
        res = minimize_scalar(lambda g: an.variance_vs_gain(P, g), bracket=(0, 1), method="golden", tol=1e-12)
        assert res.x == pytest.approx(0.53369, abs=1e-5)
        assert an.optimal_gain(P) == pytest.approx(res.x, abs=1e-6)

    def test_large_squeezing_limit(self):
        assert an.optimal_gain(replace(P, r=20)) == pytest.approx(P.xi1_sq / (math.sqrt(2) * P.xi2_sq), rel=1e-12)
        assert an.optimal_gain(replace(P, r=20)) == pytest.approx(0.7449, abs=1e-4)
        ideal = an.ExperimentParams(r=20, xi1_sq=1, xi2_sq=1, eta_sq=1)
        assert an.optimal_gain(ideal) == pytest.approx(1 / math.sqrt(2))

    def test_gap_to_unit_gain(self):
        gap = an.variance_vs_gain(P, 1 / math.sqrt(2)) - an.variance_vs_gain(P, an.optimal_gain(P))
        assert gap == pytest.approx(0.0344, abs=1e-4)
        assert an.variance_vs_gain(P, an.optimal_gain(P)) == pytest.approx(0.4346, abs=1e-4)

    @pytest.mark.parametrize("r", [0.1, 0.674, 1.0, 2.0])
    def test_argmin_on_grid(self, r):
        p = replace(P, r=r)
        best = an.variance_vs_gain(p, an.optimal_gain(p))
        assert all(best <= an.variance_vs_gain(p, g) + 1e-15 for g in np.linspace(0, 2, 401))

    def test_zero_gain(self):
        assert an.variance_vs_gain(P, 0.0) == an.sum_variance(P)

    def test_unknown_variant(self):
        with pytest.raises(ValueError):
            an.variance_vs_gain(P, 0.5, "other")


class TestCapacities:
    def test_nbar_11(self):
        c = an.channel_capacities(P.with_nbar(11))
        assert c.c_unhelped == pytest.approx(2.911, abs=1e-3)
        assert c.c_helped == pytest.approx(3.139, abs=1e-3)
        assert c.c_coherent == pytest.approx(math.log(12))
        assert c.c_squeezed == pytest.approx(math.log(23))
        assert (c.c_coherent, c.c_squeezed) == pytest.approx((2.4849, 3.1355), abs=1e-4)

    def test_nbar_11_measured_floors(self):
        c = an.channel_capacities(P.with_nbar(11), an.MEASURED_FLOORS)
        assert c.c_unhelped == pytest.approx(2.91, abs=0.01)
        assert c.c_helped == pytest.approx(3.14, abs=0.01)

    def test_no_signal(self):
        c = an.channel_capacities(P.with_nbar(math.sinh(P.r) ** 2))
        assert c.c_helped == 0 and c.c_unhelped == 0

    def test_nbar_below_squeezing_photons(self):
        with pytest.raises(ValueError):
            P.with_nbar(0.1)

    def test_signal_variance_ignored_for_floors(self):
        c1 = an.channel_capacities(replace(P, v_xs=1.0).with_nbar(5))
        c0 = an.channel_capacities(P.with_nbar(5))
        assert c1 == c0

    def test_help_always_wins(self):
        for c in an.sweep_nbar(P, np.linspace(0.6, 50, 100)):
            assert c.c_helped >= c.c_unhelped >= 0


class TestThresholds:
    def test_closed_form_floors(self):
        th = an.capacity_thresholds(P)
        assert th.coherent_helped == pytest.approx(1.00, abs=0.02)
        assert th.coherent_unhelped == pytest.approx(1.31, abs=0.02)
        # the squeezed crossing is ill-conditioned; exact floors put it here
        assert th.squeezed_helped == pytest.approx(10.2107, abs=1e-3)

    def test_measured_floors(self):
        th = an.capacity_thresholds(P, an.MEASURED_FLOORS)
        assert th == pytest.approx((1.00, 1.31, 10.52), abs=0.02)

    def test_roots_are_crossings(self):
        th = an.capacity_thresholds(P)
        c = an.channel_capacities(P.with_nbar(th.coherent_helped))
        assert c.c_helped == pytest.approx(c.c_coherent, abs=1e-6)
        c = an.channel_capacities(P.with_nbar(th.squeezed_helped))
        assert c.c_helped == pytest.approx(c.c_squeezed, abs=1e-6)

    def test_no_root(self):
        # without squeezing dense coding never beats the squeezed-state baseline
        with pytest.raises(an.NoRoot):
            an.capacity_thresholds(replace(P, r=0.0))


class TestSweeps:
    def test_r_zero_row(self):
        (row,) = an.sweep_r(P, [0.0])
        assert (row.v_sum, row.v_diff, row.v_sum_helped_opt, row.g_opt) == pytest.approx((1, 1, 1, 0))

    def test_experimental_row(self):
        (row,) = an.sweep_r(P, [0.674])
        assert (row.v_sum, row.v_diff, row.v_sum_helped, row.v_sum_helped_opt) == pytest.approx(
            (0.760, 0.479, 0.469, 0.4346), abs=5e-4)

    def test_nbar_row(self):
        (c,) = an.sweep_nbar(P, [11])
        assert (c.c_unhelped, c.c_helped, c.c_coherent, c.c_squeezed) == pytest.approx(
            (2.911, 3.139, 2.485, 3.136), abs=1e-3)

    @pytest.mark.parametrize("grid", [[], [0.5, 0.2, 0.9], [[0.1]]])
    def test_bad_grid(self, grid):
        with pytest.raises(ValueError):
            an.sweep_r(P, grid)

    def test_opt_never_worse(self):
        for row in an.sweep_r(P, np.linspace(0, 2, 41)):
            assert row.v_sum_helped_opt <= min(row.v_sum, row.v_sum_helped) + 1e-15
