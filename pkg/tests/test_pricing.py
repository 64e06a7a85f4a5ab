import math

import numpy as np
import pytest

from vgpricer import (
    FourierGrid,
    MarketContext,
    StripError,
    VGParams,
    ValidationError,
    black_scholes,
    calibrate_q,
    cumulants,
    default_damping,
    er_objective,
    error_surface,
    payoff_recover,
    payoff_transform,
    price_extended,
    price_generalized,
    price_surface,
)
from vgpricer.pricing import _auto_grid
from conftest import RATE, SPOT, TABLE1


class TestMarketContext:
    def test_validation(self):
        with pytest.raises(ValidationError):
            MarketContext(0.0, 100.0, 0.05, 1.0)
        with pytest.raises(ValidationError):
            MarketContext(100.0, 100.0, 0.05, 0.0)

    def test_moneyness(self):
        mkt = MarketContext(110.0, 100.0, 0.05, 1.0)
        assert mkt.moneyness == 1.1


class TestFourierGrid:
    def test_frac_consistency(self):
        grid = FourierGrid.make(64, 0.1, 0.01, -1.5)
        assert grid.frac == pytest.approx(0.001 / (2.0 * math.pi))
        with pytest.raises(ValidationError):
            FourierGrid(64, 0.1, 0.01, 0.5, -1.5)

    def test_power_of_two(self):
        with pytest.raises(ValidationError):
            FourierGrid.make(48, 0.1, 0.01, -1.5)


class TestBlackScholes:
    def test_atm_benchmark_cell(self):
        quote = black_scholes(MarketContext(SPOT, 438.98, RATE, 0.25), 0.1848)
        assert abs(quote.price - 19.53) < 0.01

    def test_deep_itm_benchmark_cell(self):
        quote = black_scholes(MarketContext(SPOT, 219.49, RATE, 0.0625), 0.1848)
        assert abs(quote.price - 220.31) < 0.01

    def test_vanishing_time_value(self):
        quote = black_scholes(MarketContext(SPOT, SPOT, RATE, 1e-6), 0.1848)
        assert quote.price < 0.01

    def test_positive_vol_required(self):
        with pytest.raises(ValidationError):
            black_scholes(MarketContext(SPOT, SPOT, RATE, 1.0), 0.0)


class TestPayoffTransform:
    def test_unit_moneyness_closed_form(self):
        y = np.array([0.5 - 1.5j, 2.0 - 2.0j])
        iy = 1j * y
        assert np.max(np.abs(payoff_transform(1.0, y) - 1.0 / (iy * (iy - 1.0)))) < 1e-15

    def test_quadratic_decay(self):
        q = -1.3
        big = abs(payoff_transform(1.0, 1e3 + 1j * q))
        bigger = abs(payoff_transform(1.0, 2e3 + 1j * q))
        assert abs(big / bigger - 4.0) < 0.2  # |g| ~ |xi|^-2

    def test_strip_error(self):
        with pytest.raises(StripError):
            payoff_transform(1.0, 1.0 - 0.5j)


class TestPayoffRecover:
    def test_recovers_payoff_interior(self):
        xs = np.linspace(-1.0, 1.0, 201)
        rec = payoff_recover(1.0, -1.5, xs)
        true = np.maximum(np.exp(xs) - 1.0, 0.0)
        i = int(np.argmin(np.abs(xs - 0.3)))
        assert abs(rec[i] - true[i]) < 1e-3

    def test_otm_region_near_zero(self):
        xs = np.linspace(-3.0, -2.0, 41)
        rec = payoff_recover(1.0, -1.0086, xs)
        assert np.max(np.abs(rec)) < 1e-3

    def test_itm_value_at_logk_plus_one(self):
        k = 1.0
        xs = np.linspace(0.0, 1.0, 126)  # includes x = 1 = log(k) + 1
        rec = payoff_recover(k, -1.0086, xs)
        assert abs(rec[-1] - k * (math.e - 1.0)) < 2e-3 * k

    def test_strip_error(self):
        with pytest.raises(StripError):
            payoff_recover(1.0, -0.9, np.linspace(-1, 1, 11))


class TestErObjective:
    def test_refinement_decreases_error(self):
        # Grid refinement: node count and truncation half-width double
        # together (fixed spacing), and the reconstruction error falls.
        def er_at(n, half_width):
            xs = np.linspace(-2.0, 2.0, 200)
            rec = payoff_recover(1.0, -1.5, xs, n=n, half_width=half_width)
            true = np.maximum(np.exp(xs) - 1.0, 0.0)
            return float(np.sqrt(np.mean((true - rec) ** 2)))

        seq = [er_at(1 << 14, 32.0), er_at(1 << 15, 64.0), er_at(1 << 16, 128.0)]
        assert seq[0] > seq[1] > seq[2]

    def test_worse_at_minus_two(self):
        assert er_objective(1.0, -2.0) > er_objective(1.0, -1.0086)

    def test_unimodal_on_scan(self):
        qs = np.linspace(-3.0, -1.001, 41)
        vals = np.array([er_objective(1.0, q) for q in qs])
        for i in range(1, 40):
            is_peak = vals[i] > vals[i - 1] and vals[i] > vals[i + 1]
            assert not is_peak


class TestCalibrateQ:
    def test_atm_optimum(self):
        q = calibrate_q(1.0)
        assert abs(q - (-1.0086)) < 0.02
        assert q < -1.0

    def test_nearly_strike_independent(self):
        base = calibrate_q(1.0)
        for k in (0.8, 1.25):
            assert abs(calibrate_q(k) - base) < 0.05


class TestPriceExtended:
    def test_deep_itm_near_discounted_intrinsic(self, table1_yearly, measure_yearly):
        mkt = MarketContext(SPOT, 219.49, RATE, 0.0625)
        quote = price_extended(table1_yearly, mkt, measure=measure_yearly)
        assert abs(quote.price - 220.31) < 0.5

    def test_deep_otm_near_zero(self, table1_yearly, measure_yearly):
        quote = price_extended(
            table1_yearly, MarketContext(SPOT, 877.96, RATE, 0.0625), measure=measure_yearly
        )
        assert quote.price < 0.01

    def test_vanishing_strike_limit(self, table1, measure):
        quote = price_extended(table1, MarketContext(SPOT, 1e-6, RATE, 0.25), measure=measure)
        assert abs(quote.price - SPOT) < 1e-6 * SPOT

    def test_fourier_route_agrees(self, table1, measure):
        mkt = MarketContext(SPOT, 420.0, RATE, 0.5)
        a = price_extended(table1, mkt, measure=measure, route="mixture").price
        b = price_extended(table1, mkt, measure=measure, route="fourier").price
        assert abs(a - b) < 1e-6 * SPOT


class TestPriceGeneralized:
    def test_cross_engine_band(self, table1, measure):
        for k in (0.95, 1.0, 1.05):
            for tau in (0.25, 0.5, 1.0):
                mkt = MarketContext(SPOT, SPOT / k, RATE, tau)
                ext = price_extended(table1, mkt, measure=measure).price
                gen = price_generalized(table1, mkt, measure=measure).price
                assert abs(ext - gen) <= 0.01 * mkt.strike

    def test_deep_otm(self, table1_yearly, measure_yearly):
        quote = price_generalized(
            table1_yearly, MarketContext(SPOT, 877.96, RATE, 0.25), measure=measure_yearly
        )
        assert quote.price <= 0.005
        assert quote.diagnostics["imag_residue"] < 1e-6 * 877.96

    def test_atm_increases_with_maturity(self, table1_yearly, measure_yearly):
        prices = [
            price_generalized(
                table1_yearly, MarketContext(SPOT, SPOT, RATE, tau), measure=measure_yearly
            ).price
            for tau in (0.0625, 0.125, 0.25, 0.5, 0.75, 1.0)
        ]
        assert all(b > a for a, b in zip(prices, prices[1:]))

    def test_damping_independence(self, table1, measure):
        q0 = default_damping(measure)
        mkt = MarketContext(SPOT, SPOT, RATE, 0.25)
        prices = []
        for q in (q0, q0 - 0.2):
            grid = _auto_grid(measure, mkt.tau, np.array([0.0]), q)
            prices.append(price_generalized(table1, mkt, grid=grid, measure=measure).price)
        assert abs(prices[0] - prices[1]) < 1e-4 * mkt.strike

    def test_rejects_undamped_contour(self, table1, measure):
        grid = FourierGrid.make(1 << 16, 0.05, 1e-5, -0.5)
        with pytest.raises(StripError):
            price_generalized(table1, MarketContext(SPOT, SPOT, RATE, 0.25), grid=grid, measure=measure)

    def test_rejects_contour_outside_band(self, measure):
        with pytest.raises(StripError):
            _auto_grid(measure, 0.25, np.array([0.0]), -5.0)


class TestSurfaces:
    KS = np.round(np.arange(2.00, 0.499, -0.05), 2)
    TAUS = (0.0625, 0.125, 0.25, 0.5, 0.75, 1.0)

    @pytest.mark.parametrize("engine", ["extended", "generalized"])
    def test_lattice_shape_and_bounds(self, table1, engine):
        strikes = np.round(SPOT / self.KS, 2)
        quotes = price_surface(table1, RATE, SPOT, strikes, self.TAUS, engine=engine)
        assert len(quotes) == strikes.size * len(self.TAUS)
        prices = np.array([q.price for q in quotes]).reshape(strikes.size, len(self.TAUS))
        lower = np.maximum(0.0, SPOT - strikes[:, None] * np.exp(-RATE * np.array(self.TAUS)[None, :]))
        assert np.all(prices >= lower - 1e-6 * SPOT)
        assert np.all(prices <= SPOT + 1e-6 * SPOT)
        # nonincreasing and convex in strike, column by column
        for j in range(len(self.TAUS)):
            col = prices[:, j]
            assert np.all(np.diff(col) <= 1e-6 * SPOT)
            slopes = np.diff(col) / np.diff(strikes)
            assert np.all(np.diff(slopes) >= -1e-6 * SPOT)

    def test_strike_major_ordering(self, table1):
        strikes = [400.0, 450.0]
        taus = [0.25, 0.5]
        quotes = price_surface(table1, RATE, SPOT, strikes, taus)
        direct = [
            price_extended(table1, MarketContext(SPOT, K, RATE, t)).price
            for K in strikes
            for t in taus
        ]
        assert np.allclose([q.price for q in quotes], direct, atol=1e-10)


class TestErrorSurface:
    def test_sign_pattern_quarter_horizon(self, table1_yearly):
        vol = math.sqrt(cumulants(table1_yearly).variance)
        otm = np.array([0.80, 0.85, 0.90, 0.95])
        itm = np.array([1.05, 1.10, 1.15, 1.20, 1.25, 1.30])
        ks = np.concatenate([otm, itm])
        err = error_surface(table1_yearly, RATE, SPOT, SPOT / ks, [0.25], vol)[:, 0]
        assert np.all(err[:4] < 0.0)
        assert np.all(err[4:] > 0.0)

    def test_deep_cells_vanish(self, table1_yearly):
        vol = math.sqrt(cumulants(table1_yearly).variance)
        err = error_surface(
            table1_yearly, RATE, SPOT, SPOT / np.array([2.0, 0.5]), [0.0625], vol
        )
        assert np.max(np.abs(err)) < 5e-3

    def test_adjacent_cells_continuous(self, table1_yearly):
        vol = math.sqrt(cumulants(table1_yearly).variance)
        ks = np.round(np.arange(2.00, 0.499, -0.05), 2)
        err = error_surface(table1_yearly, RATE, SPOT, SPOT / ks, [0.25, 0.5], vol)
        assert np.max(np.abs(np.diff(err, axis=0))) < 0.05


class TestBsConsistencyLimit:
    def test_scaled_family_approaches_black_scholes(self):
        c = 256.0
        p = VGParams(
            TABLE1.mu,
            TABLE1.delta,
            math.sqrt(TABLE1.sigma**2 + (1.0 - 1.0 / c) * TABLE1.theta * TABLE1.delta**2),
            c * TABLE1.alpha,
            TABLE1.theta / c,
        )
        assert cumulants(p).variance == pytest.approx(cumulants(TABLE1).variance, rel=1e-12)
        mkt = MarketContext(SPOT, SPOT, RATE, 0.25)
        vg = price_extended(p, mkt).price
        bs = black_scholes(mkt, math.sqrt(cumulants(TABLE1).variance)).price
        assert abs(vg - bs) < 0.005 * SPOT
