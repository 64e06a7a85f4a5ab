import math

import numpy as np
import pytest

from vgpricer import (
    EsscherMeasure,
    NotSolvable,
    OutOfDomain,
    VGParams,
    esscher_tilted_params,
    g_ratio,
    martingale_check,
    mgf,
    mgf_quadrature,
    mgf_strip,
    solvability,
    solve_h_star,
)
from conftest import RATE, TABLE1, random_params


class TestGRatio:
    def test_value_at_zero(self, table1):
        assert abs(g_ratio(table1, 0.0) - 1.7948878) < 1e-6
        # direct-arithmetic oracle
        assert g_ratio(table1, 0.0) == pytest.approx(table1.quad(0.0) / table1.quad(1.0), rel=1e-15)

    def test_monotone_increasing(self, table1):
        rng = np.random.default_rng(21)
        h1, h2 = mgf_strip(table1)
        lo, hi = h1 + 1e-6, h2 - 1.0 - 1e-6
        for _ in range(100):
            a, b = sorted(rng.uniform(lo, hi, size=2))
            if a == b:
                continue
            assert g_ratio(table1, b) > g_ratio(table1, a)

    def test_pole_at_upper_end(self, table1):
        _, h2 = mgf_strip(table1)
        assert g_ratio(table1, h2 - 1.0 - 1e-8) > 1e6

    def test_out_of_domain(self, table1):
        h1, h2 = mgf_strip(table1)
        with pytest.raises(OutOfDomain):
            g_ratio(table1, h2 - 0.5)
        with pytest.raises(OutOfDomain):
            g_ratio(table1, h1 - 0.1)


class TestSolvability:
    def test_table1(self, table1):
        h1, h2 = mgf_strip(table1)
        assert solvability(table1)
        assert abs((h2 - h1) - 2.839) < 2e-3

    def test_large_sigma_not_solvable(self):
        assert not solvability(VGParams(0.0, 0.0, 100.0, 1.0, 1.0))

    def test_boundary_inequality(self):
        # delta = 0: solvable iff 2/(theta sigma^2) > 1/4; theta*sigma^2=7.9.
        assert solvability(VGParams(0.0, 0.0, math.sqrt(7.9), 1.0, 1.0))
        assert not solvability(VGParams(0.0, 0.0, math.sqrt(8.1), 1.0, 1.0))


class TestSolveHStar:
    def test_table1_root(self, measure):
        assert abs(measure.h_star - (-0.4703)) < 1e-3

    def test_round_trip(self, table1, measure):
        target = math.exp((RATE - table1.mu) / table1.alpha)
        assert abs(g_ratio(table1, measure.h_star) - target) < 1e-10

    def test_unit_target_balances_quadratic(self, table1):
        # r = mu makes the target exp(0) = 1, i.e. quad(h*) = quad(h*+1).
        m = solve_h_star(table1, table1.mu)
        assert abs(table1.quad(m.h_star) - table1.quad(m.h_star + 1.0)) < 1e-10

    def test_zero_rate_balances_mgf(self, table1):
        # r = 0: the martingale identity M(h*+1) = e^r M(h*) collapses to
        # M(h*) = M(h*+1).
        m = solve_h_star(table1, 0.0)
        assert abs(mgf(table1, m.h_star, 1.0) - mgf(table1, m.h_star + 1.0, 1.0)) < 1e-10

    def test_symmetric_fixed_point(self):
        # Symmetric model, zero drift, zero rate: quad(-1/2) = quad(1/2)
        # exactly, so h* = -1/2.
        p = VGParams(0.0, 0.0, 1.1, 0.9, 1.2)
        m = solve_h_star(p, 0.0)
        assert abs(m.h_star + 0.5) < 1e-9

    def test_not_solvable(self):
        with pytest.raises(NotSolvable):
            solve_h_star(VGParams(0.0, 0.0, 3.0, 1.0, 1.0), 0.05)

    def test_bisection_oracle(self, table1, measure):
        target = math.exp((RATE - table1.mu) / table1.alpha)
        h1, h2 = mgf_strip(table1)
        lo, hi = h1 + 1e-9, h2 - 1.0 - 1e-9
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if g_ratio(table1, mid) < target:
                lo = mid
            else:
                hi = mid
        assert abs(measure.h_star - 0.5 * (lo + hi)) < 1e-9


class TestEsscherMeasure:
    def test_tilted_sets_consistent(self, table1, measure):
        assert measure.tilted == esscher_tilted_params(table1, measure.h_star)
        assert measure.tilted_plus == esscher_tilted_params(table1, measure.h_star + 1.0)

    def test_theta_ratio_identity(self, table1, measure):
        ratio = measure.tilted_plus.theta / measure.tilted.theta
        assert ratio == pytest.approx(math.exp((RATE - table1.mu) / table1.alpha), rel=1e-12)

    def test_delta_shift_identity(self, measure):
        assert measure.tilted_plus.delta == pytest.approx(
            measure.tilted.delta + measure.tilted.sigma**2, rel=1e-14
        )

    def test_from_h_validates(self, table1):
        with pytest.raises(OutOfDomain):
            EsscherMeasure.from_h(table1, RATE, -2.6997)

    def test_strip_constraint(self, table1, measure):
        h1, h2 = mgf_strip(table1)
        assert h1 < measure.h_star < h2 - 1.0


class TestMartingale:
    @pytest.mark.parametrize("tau", [0.25, 1.0])
    def test_analytic_residual(self, measure, tau):
        assert martingale_check(measure, tau) < 1e-12

    @pytest.mark.parametrize("tau", [0.25, 1.0])
    def test_quadrature_residual(self, measure, tau):
        assert martingale_check(measure, tau, method="quadrature") < 1e-4

    def test_random_solvable_params(self):
        rng = np.random.default_rng(31)
        found = 0
        while found < 10:
            p = random_params(rng)
            if not solvability(p):
                continue
            m = solve_h_star(p, 0.03)
            assert martingale_check(m, 0.25) < 1e-12
            assert martingale_check(m, 1.0) < 1e-12
            found += 1

    def test_wrong_tilt_detected(self, table1, measure):
        wrong = EsscherMeasure.from_h(table1, RATE, measure.h_star + 0.1)
        assert martingale_check(wrong, 0.25) > 1e-3


class TestTheoremEquality:
    def test_tilted_mgf_ratio(self, table1):
        # M(z, 1, h) = M(h+z, 1) / M(h, 1) at random (h, z) pairs.
        rng = np.random.default_rng(41)
        h1, h2 = mgf_strip(table1)
        count = 0
        while count < 20:
            h = rng.uniform(h1 + 0.05, h2 - 0.05)
            z = rng.uniform(h1 + 0.05 - h, h2 - 0.05 - h)
            if not h1 < h + z < h2 or abs(z) < 1e-3:
                continue
            tilted = esscher_tilted_params(table1, h)
            lhs = mgf(tilted, z, 1.0)
            rhs = mgf(table1, h + z, 1.0) / mgf(table1, h, 1.0)
            assert abs(lhs / rhs - 1.0) < 1e-10
            count += 1

    def test_radon_nikodym_normalization(self, table1, measure):
        # E^P[exp(h* Y_tau) / M(h*, tau)] = 1 by chronometer quadrature.
        for tau in (0.25, 1.0):
            lhs = mgf_quadrature(table1, measure.h_star, tau)
            assert abs(lhs / mgf(table1, measure.h_star, tau) - 1.0) < 1e-6
