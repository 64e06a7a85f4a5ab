"""Path simulation of the Gamma Ornstein-Uhlenbeck variance process and the
VG log-price built on it.

The background driving Levy process z is compound Poisson: jump times
arrive at rate alpha per unit of the lambda-clock, jump sizes are
exponential with mean theta.  The variance solves

    d sigma^2(t) = -lambda sigma^2(t) dt + dz(lambda t)

whose jump-driven solution is exact (no discretization error):

    sigma^2(t) = exp(-lambda t) sigma^2(0)
                 + sum_{a_k <= t} exp(-lambda (t - a_k)) xi_k

Its running integral sigma^2*(t) is piecewise analytic (sigma^2 decays
exponentially between jumps), and the pathwise identity

    lambda sigma^2*(t) - z(lambda t) = sigma^2(0) - sigma^2(t)

holds exactly.  The log-price increment over a step of length dt is
mu*dt + delta*dv + sigma*sqrt(dv)*Z with dv the integrated-variance
increment, because the Brownian integral is conditionally normal with
variance dv.

The stationary law of sigma^2 is Gamma(alpha, theta).  Jump sizes are
exponential with MEAN theta (not rate theta): this is the convention that
makes the stationary moments alpha*theta and alpha*theta^2 and is the one
every statistical check targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ValidationError
from .model import VGParams, asymptotic_normal_params
from .numerics import std_normal_cdf

__all__ = [
    "OUConfig",
    "PathBundle",
    "simulate_bdlp",
    "simulate_ou",
    "integrate_variance",
    "simulate_vg_path",
    "simulate_terminal",
    "simulate_vg_increments",
    "asymptotic_normality_test",
    "ou_transition_cf",
    "ks_statistic",
    "ks_critical_value",
]


@dataclass(frozen=True)
class OUConfig:
    """Gamma-OU simulation configuration.

    alpha     Poisson rate of BDLP jumps per unit lambda-time
    theta     mean of the exponential jump sizes
    lam       mean-reversion rate (> 0)
    sigma2_0  initial variance (>= 0)
    horizon   total simulated time
    dt        output grid step
    """

    alpha: float
    theta: float
    lam: float = 1.0
    sigma2_0: float = 0.0
    horizon: float = 100.0
    dt: float = 0.01

    def __post_init__(self):
        if self.alpha <= 0.0 or self.theta <= 0.0:
            raise ValidationError("alpha and theta must be positive")
        if self.lam <= 0.0:
            raise ValidationError(f"lam must be > 0, got {self.lam!r}")
        if self.sigma2_0 < 0.0:
            raise ValidationError(f"sigma2_0 must be >= 0, got {self.sigma2_0!r}")
        if self.dt <= 0.0 or self.horizon < self.dt:
            raise ValidationError("need dt > 0 and horizon >= dt")

    @property
    def n_steps(self) -> int:
        return int(round(self.horizon / self.dt))


@dataclass(frozen=True)
class PathBundle:
    """Aligned sample paths on a common time grid, plus the jumps that
    generated them (needed to rebuild the integrated variance exactly)."""

    times: np.ndarray
    z: np.ndarray
    sigma2: np.ndarray
    sigma2_star: np.ndarray
    y: Optional[np.ndarray]
    jump_times: np.ndarray
    jump_sizes: np.ndarray
    lam: float
    sigma2_0: float


def _draw_jumps(cfg: OUConfig, rng: np.random.Generator):
    """Jump times (t-clock, sorted) and sizes over [0, horizon]."""
    count = rng.poisson(cfg.alpha * cfg.lam * cfg.horizon)
    times = np.sort(rng.uniform(0.0, cfg.horizon, size=count))
    sizes = rng.exponential(cfg.theta, size=count)
    return times, sizes


def simulate_bdlp(cfg: OUConfig, seed: int):
    """Compound-Poisson background driver: (jump_times, jump_sizes).

    The count is Poisson(alpha * lam * horizon) because z runs on the
    lambda-accelerated clock; sizes are exponential with mean theta.
    """
    rng = np.random.default_rng(seed)
    return _draw_jumps(cfg, rng)


def _ou_paths(cfg: OUConfig, times, jt, jx):
    """Exact sigma^2, z and integrated variance on the output grid."""
    n = times.size - 1
    lam = cfg.lam
    decay = math.exp(-lam * cfg.dt)
    idx = np.minimum(np.searchsorted(times, jt, side="left"), n)
    # Per-interval sums: raw jump mass, and jump mass decayed to interval end.
    z_inc = np.bincount(idx, weights=jx, minlength=n + 1)
    decayed_end = np.bincount(
        idx, weights=jx * np.exp(-lam * (times[idx] - jt)), minlength=n + 1
    )
    # Integral of each jump's decaying tail from its arrival to interval end.
    int_inc = np.bincount(
        idx, weights=jx * (1.0 - np.exp(-lam * (times[idx] - jt))) / lam, minlength=n + 1
    )

    sigma2 = np.empty(n + 1)
    istar = np.empty(n + 1)
    sigma2[0] = cfg.sigma2_0
    istar[0] = 0.0
    for i in range(1, n + 1):
        prev = sigma2[i - 1]
        sigma2[i] = prev * decay + decayed_end[i]
        istar[i] = istar[i - 1] + prev * (1.0 - decay) / lam + int_inc[i]
    z = np.cumsum(z_inc)
    return z, sigma2, istar


def simulate_ou(cfg: OUConfig, seed: int) -> PathBundle:
    """Exact Gamma-OU variance path with its driver and integrated variance."""
    rng = np.random.default_rng(seed)
    jt, jx = _draw_jumps(cfg, rng)
    times = cfg.dt * np.arange(cfg.n_steps + 1)
    z, sigma2, istar = _ou_paths(cfg, times, jt, jx)
    return PathBundle(times, z, sigma2, istar, None, jt, jx, cfg.lam, cfg.sigma2_0)


def integrate_variance(bundle: PathBundle) -> np.ndarray:
    """Rebuild the integrated variance from the jump data by the piecewise
    closed form (decay integrals between jumps); no quadrature error."""
    lam = bundle.lam
    times, jt, jx = bundle.times, bundle.jump_times, bundle.jump_sizes
    out = bundle.sigma2_0 * (1.0 - np.exp(-lam * times)) / lam
    if jt.size:
        dtm = times[:, None] - jt[None, :]
        contrib = np.where(dtm >= 0.0, 1.0 - np.exp(-lam * np.maximum(dtm, 0.0)), 0.0)
        out = out + contrib @ (jx / lam)
    return out


def simulate_vg_path(p: VGParams, cfg: OUConfig, seed: int) -> PathBundle:
    """VG log-price path driven by the Gamma-OU integrated variance.

    cfg.alpha and cfg.theta are overridden by the model parameters; per
    step, Y gains mu*dt + delta*dv + sigma*sqrt(dv)*Z.
    """
    cfg = OUConfig(p.alpha, p.theta, cfg.lam, cfg.sigma2_0, cfg.horizon, cfg.dt)
    rng = np.random.default_rng(seed)
    jt, jx = _draw_jumps(cfg, rng)
    times = cfg.dt * np.arange(cfg.n_steps + 1)
    z, sigma2, istar = _ou_paths(cfg, times, jt, jx)
    dv = np.diff(istar)
    shocks = rng.standard_normal(dv.size)
    increments = p.mu * cfg.dt + p.delta * dv + p.sigma * np.sqrt(dv) * shocks
    y = np.concatenate(([0.0], np.cumsum(increments)))
    return PathBundle(times, z, sigma2, istar, y, jt, jx, cfg.lam, cfg.sigma2_0)


def simulate_terminal(
    p: VGParams,
    t: float,
    n_samples: int,
    seed: int,
    lam: float = 1.0,
    stationary_start: bool = True,
) -> np.ndarray:
    """n_samples independent draws of Y_t from the OU construction.

    Each sample integrates one OU path in closed form:
    sigma^2*(t) = sigma^2(0)(1 - e^(-lam t))/lam
                  + sum xi_k (1 - e^(-lam (t - a_k)))/lam,
    then Y_t | sigma^2* is normal.  With a stationary start sigma^2(0) is
    Gamma(alpha, theta).
    """
    if t <= 0.0:
        raise ValidationError(f"t must be > 0, got {t!r}")
    rng = np.random.default_rng(seed)
    counts = rng.poisson(p.alpha * lam * t, size=n_samples)
    total = int(counts.sum())
    owner = np.repeat(np.arange(n_samples), counts)
    arrivals = rng.uniform(0.0, t, size=total)
    sizes = rng.exponential(p.theta, size=total)
    weights = sizes * (1.0 - np.exp(-lam * (t - arrivals))) / lam
    istar = np.bincount(owner, weights=weights, minlength=n_samples)
    if stationary_start:
        s0 = rng.gamma(p.alpha, p.theta, size=n_samples)
    else:
        s0 = np.zeros(n_samples)
    istar = istar + s0 * (1.0 - math.exp(-lam * t)) / lam
    shocks = rng.standard_normal(n_samples)
    return p.mu * t + p.delta * istar + p.sigma * np.sqrt(istar) * shocks


def simulate_vg_increments(
    p: VGParams, n_samples: int, dt: float, seed: int, chronometer: str = "gamma"
) -> np.ndarray:
    """Independent VG increments over windows of length dt.

    chronometer="gamma" draws the exact subordinator increment
    Gamma(dt*alpha, theta), i.e. the VG law itself; "ou" integrates a
    stationary Gamma-OU variance over each window (lam = 1), whose
    increments match the VG moments but carry less mixing variance.
    """
    if dt <= 0.0:
        raise ValidationError(f"dt must be > 0, got {dt!r}")
    if chronometer == "gamma":
        rng = np.random.default_rng(seed)
        v = rng.gamma(dt * p.alpha, p.theta, size=n_samples)
        shocks = rng.standard_normal(n_samples)
        return p.mu * dt + p.delta * v + p.sigma * np.sqrt(v) * shocks
    if chronometer == "ou":
        return simulate_terminal(p, dt, n_samples, seed)
    raise ValidationError(f"unknown chronometer {chronometer!r}")


def ou_transition_cf(lam: float, alpha: float, theta: float, u: float, xi):
    """Characteristic function of Integral_0^u exp(-lam (u - s)) dz(lam s):
    ((rate - i xi exp(-lam u)) / (rate - i xi))^alpha with rate = 1/theta."""
    rate = 1.0 / theta
    xi = np.asarray(xi, dtype=complex)
    out = ((rate - 1j * xi * math.exp(-lam * u)) / (rate - 1j * xi)) ** alpha
    return out if out.ndim else complex(out)


def ks_statistic(samples: np.ndarray, cdf_at_sorted: np.ndarray) -> float:
    """Two-sided Kolmogorov-Smirnov distance between the empirical CDF of
    samples and the model CDF evaluated at the sorted samples."""
    n = samples.size
    f = np.asarray(cdf_at_sorted, dtype=float)
    if f.size != n:
        raise ValidationError("need one CDF value per sample")
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_critical_value(level: float, n: int) -> float:
    """Asymptotic two-sided KS critical value: c(level)/sqrt(n) with
    2 sum (-1)^(k-1) exp(-2 k^2 c^2) = level."""
    if not 0.0 < level < 1.0:
        raise ValidationError("level must be in (0, 1)")

    def tail(c: float) -> float:
        return 2.0 * sum((-1) ** (k - 1) * math.exp(-2.0 * k * k * c * c) for k in range(1, 101))

    lo, hi = 0.3, 3.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if tail(mid) > level:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi) / math.sqrt(n)


def asymptotic_normality_test(p: VGParams, t_large: float, n_samples: int, seed: int) -> float:
    """KS distance between standardized OU-construction draws of Y_t and the
    standard normal law; small for large t by the central limit behaviour."""
    a, b = asymptotic_normal_params(p)
    ys = simulate_terminal(p, t_large, n_samples, seed)
    zs = np.sort((ys - a * t_large) / (b * math.sqrt(t_large)))
    return ks_statistic(zs, std_normal_cdf(zs))
