import math

import numpy as np
import pytest

from vgpricer import (
    OUConfig,
    ValidationError,
    VGParams,
    asymptotic_normal_params,
    asymptotic_normality_test,
    cdf_fourier,
    cumulants,
    integrate_variance,
    ks_critical_value,
    ks_statistic,
    ou_transition_cf,
    simulate_bdlp,
    simulate_ou,
    simulate_terminal,
    simulate_vg_increments,
    simulate_vg_path,
    std_normal_cdf,
)
from conftest import TABLE1

ALPHA, THETA = TABLE1.alpha, TABLE1.theta


class TestBdlp:
    def test_mean_count(self):
        horizon = 100.0 / ALPHA  # alpha * lam * horizon = 100
        cfg = OUConfig(ALPHA, THETA, lam=1.0, horizon=horizon, dt=horizon / 10)
        counts = [simulate_bdlp(cfg, seed)[0].size for seed in range(10000)]
        mean = float(np.mean(counts))
        se = math.sqrt(100.0 / 10000.0)
        assert abs(mean - 100.0) < 3.0 * se

    def test_mean_jump_size(self):
        horizon = 1e5 / ALPHA
        cfg = OUConfig(ALPHA, THETA, lam=1.0, horizon=horizon, dt=horizon / 10)
        _, sizes = simulate_bdlp(cfg, 99)
        se = THETA / math.sqrt(sizes.size)
        assert abs(sizes.mean() - THETA) < 3.0 * se

    def test_bit_for_bit_determinism(self):
        cfg = OUConfig(ALPHA, THETA, horizon=50.0, dt=0.5)
        a_t, a_x = simulate_bdlp(cfg, 4321)
        b_t, b_x = simulate_bdlp(cfg, 4321)
        assert np.array_equal(a_t, b_t) and np.array_equal(a_x, b_x)

    def test_config_validation(self):
        with pytest.raises(ValidationError):
            OUConfig(ALPHA, THETA, lam=0.0)
        with pytest.raises(ValidationError):
            OUConfig(ALPHA, THETA, dt=-0.1)


class TestOuPath:
    def test_positivity_and_monotone_chronometer(self):
        cfg = OUConfig(ALPHA, THETA, horizon=200.0, dt=0.05)
        bundle = simulate_ou(cfg, 7)
        assert np.all(bundle.sigma2 >= 0.0)
        assert np.all(np.diff(bundle.sigma2_star) >= 0.0)

    def test_stationary_mean_and_variance(self):
        # dt = 8 decorrelates consecutive samples (exp(-8) ~ 3e-4), so the
        # plain-SE three-sigma bands apply.
        cfg = OUConfig(ALPHA, THETA, lam=1.0, horizon=20.0 + 8.0 * 100000, dt=8.0)
        bundle = simulate_ou(cfg, 11)
        sample = bundle.sigma2[bundle.times > 20.0]
        n = sample.size
        mean, var = sample.mean(), sample.var()
        se_mean = math.sqrt(var / n)
        m4 = np.mean((sample - mean) ** 4)
        se_var = math.sqrt((m4 - var * var) / n)
        assert abs(mean - ALPHA * THETA) < 3.0 * se_mean
        assert abs(var - ALPHA * THETA**2) < 3.0 * se_var

    def test_transition_characteristic_function(self):
        # E[exp(i xi Integral_0^u e^{-lam(u-s)} dz(lam s))] against the
        # closed form, at 1e5 replications.
        rng = np.random.default_rng(3)
        lam, u, nrep = 1.0, 0.7, 100000
        counts = rng.poisson(ALPHA * lam * u, size=nrep)
        owner = np.repeat(np.arange(nrep), counts)
        arrivals = rng.uniform(0.0, u, size=int(counts.sum()))
        sizes = rng.exponential(THETA, size=int(counts.sum()))
        vals = np.bincount(owner, weights=sizes * np.exp(-lam * (u - arrivals)), minlength=nrep)
        xis = np.linspace(-3.0, 3.0, 25)
        empirical = np.array([np.mean(np.exp(1j * xi * vals)) for xi in xis])
        assert np.max(np.abs(empirical - ou_transition_cf(lam, ALPHA, THETA, u, xis))) < 0.02

    def test_stationary_law_gamma_cf(self):
        # Large-u transition CF tends to the Gamma(alpha, theta) CF.
        xis = np.linspace(-3.0, 3.0, 13)
        limit = ou_transition_cf(1.0, ALPHA, THETA, 40.0, xis)
        gamma_cf = (1.0 - 1j * THETA * xis) ** (-ALPHA)
        assert np.max(np.abs(limit - gamma_cf)) < 1e-12


class TestIntegratedVariance:
    def test_cointegration_identity(self):
        cfg = OUConfig(ALPHA, THETA, lam=1.3, sigma2_0=0.4, horizon=100.0, dt=0.01)
        bundle = simulate_ou(cfg, 17)
        residual = cfg.lam * bundle.sigma2_star - bundle.z + bundle.sigma2 - cfg.sigma2_0
        assert np.max(np.abs(residual)) < 1e-10

    def test_rebuild_matches_path(self):
        cfg = OUConfig(ALPHA, THETA, lam=0.8, sigma2_0=1.1, horizon=50.0, dt=0.5)
        bundle = simulate_ou(cfg, 23)
        assert np.max(np.abs(integrate_variance(bundle) - bundle.sigma2_star)) < 1e-10

    def test_frozen_variance_limit(self):
        # lam -> 0 with no jumps: sigma2 stays at sigma2_0 and the
        # chronometer grows linearly.
        cfg = OUConfig(1e-9, THETA, lam=1e-9, sigma2_0=0.7, horizon=10.0, dt=0.1)
        bundle = simulate_ou(cfg, 29)
        assert bundle.jump_times.size == 0
        expect = 0.7 * bundle.times
        mask = bundle.times > 0
        assert np.max(np.abs(bundle.sigma2_star[mask] / expect[mask] - 1.0)) < 1e-6

    def test_strictly_increasing_with_positive_start(self):
        cfg = OUConfig(ALPHA, THETA, sigma2_0=0.5, horizon=20.0, dt=0.1)
        bundle = simulate_ou(cfg, 31)
        assert np.all(np.diff(bundle.sigma2_star) > 0.0)


class TestVgPath:
    def test_increment_moments(self):
        cfg = OUConfig(ALPHA, THETA, lam=1.0, horizon=20.0 + 100000.0, dt=1.0)
        bundle = simulate_vg_path(TABLE1, cfg, 5)
        inc = np.diff(bundle.y)[bundle.times[1:] > 20.0]
        c = cumulants(TABLE1)
        se_mean = inc.std() / math.sqrt(inc.size)
        assert abs(inc.mean() - c.mean) < 3.0 * se_mean
        m4 = np.mean((inc - inc.mean()) ** 4)
        se_var = math.sqrt((m4 - inc.var() ** 2) / inc.size)
        assert abs(inc.var() - c.variance) < 3.0 * se_var

    def test_deterministic_limit(self):
        p = VGParams(0.3, 0.0, 1e-8, ALPHA, THETA)
        cfg = OUConfig(p.alpha, p.theta, horizon=10.0, dt=0.5)
        bundle = simulate_vg_path(p, cfg, 3)
        increments = np.diff(bundle.y)
        assert np.max(np.abs(increments - 0.3 * 0.5)) < 1e-6

    def test_seed_reproducibility(self):
        cfg = OUConfig(ALPHA, THETA, horizon=30.0, dt=0.25)
        a = simulate_vg_path(TABLE1, cfg, 77)
        b = simulate_vg_path(TABLE1, cfg, 77)
        assert np.array_equal(a.y, b.y) and np.array_equal(a.sigma2, b.sigma2)


class TestDistribution:
    def _model_cdf_at(self, samples, t):
        zs = np.sort(samples)
        grid = np.linspace(zs[0] - 0.5, zs[-1] + 0.5, 1001)
        cdf = cdf_fourier(TABLE1, grid, t)
        return zs, np.interp(zs, grid, cdf)

    def test_gamma_chronometer_increments_match_law(self):
        # The exact-law sampler (Gamma chronometer per Eq.-style recursion)
        # passes a KS test against the model CDF at the 1% level.
        inc = simulate_vg_increments(TABLE1, 100000, 1.0, 17, chronometer="gamma")
        zs, cdf = self._model_cdf_at(inc, 1.0)
        assert ks_statistic(zs, cdf) < ks_critical_value(0.01, zs.size)

    def test_ou_chronometer_increments_reject(self):
        # Unit-window integrals of the stationary Gamma-OU variance carry
        # only 2(lam-1+e^-lam)/lam^2 of the Gamma mixing variance, so their
        # increments are measurably lighter-tailed than the VG law.
        inc = simulate_vg_increments(TABLE1, 100000, 1.0, 17, chronometer="ou")
        zs, cdf = self._model_cdf_at(inc, 1.0)
        d = ks_statistic(zs, cdf)
        assert d > ks_critical_value(0.01, zs.size)
        assert d < 0.05

    def test_terminal_moments(self):
        t = 4.0
        ys = simulate_terminal(TABLE1, t, 200000, 13)
        c = cumulants(TABLE1)
        se = math.sqrt(c.variance * t / ys.size)
        assert abs(ys.mean() - c.mean * t) < 3.0 * se


class TestAsymptoticNormality:
    def test_large_horizon_accepts(self):
        d = asymptotic_normality_test(TABLE1, 50.0, 100000, 23)
        assert d < ks_critical_value(0.01, 100000)

    def test_short_horizon_rejects(self):
        d = asymptotic_normality_test(TABLE1, 0.25, 100000, 23)
        assert d > ks_critical_value(0.01, 100000)

    def test_standardization_uses_closed_forms(self):
        a, b = asymptotic_normal_params(TABLE1)
        t = 50.0
        ys = simulate_terminal(TABLE1, t, 20000, 41)
        zs = np.sort((ys - a * t) / (b * math.sqrt(t)))
        expected = ks_statistic(zs, std_normal_cdf(zs))
        assert asymptotic_normality_test(TABLE1, t, 20000, 41) == expected


class TestKsMachinery:
    def test_critical_value_one_percent(self):
        assert abs(ks_critical_value(0.01, 100000) - 1.6276 / math.sqrt(100000.0)) < 1e-4

    def test_statistic_on_exact_uniforms(self):
        u = (np.arange(1, 101) - 0.5) / 100.0
        assert ks_statistic(u, u) == pytest.approx(0.005)
