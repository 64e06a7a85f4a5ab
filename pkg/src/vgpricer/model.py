"""Five-parameter Variance-Gamma model: parameters and analytic functions.

The model describes a pure-jump Levy process Y with location mu, symmetry
delta, volatility sigma, Gamma shape alpha and Gamma scale theta.  Its
unit-time characteristic function is

    E[exp(i xi Y_1)] = exp(i mu xi) / (1 - i delta theta xi
                                         + 0.5 sigma^2 theta xi^2)^alpha

Everything in this module is a closed-form function of the five parameters:
the characteristic function/exponent, the moment generating function and its
finite strip (h1, h2), the first four cumulants, the Levy (jump-arrival)
density with its steepness parameters (x1, x2), and the normal law the
process converges to for large horizons.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import BranchFailure, DomainError, OutOfStrip, ValidationError

__all__ = [
    "VGParams",
    "MgfStrip",
    "SteepnessPair",
    "Cumulants",
    "KoBoLClass",
    "char_fn",
    "char_exponent",
    "mgf",
    "mgf_strip",
    "steepness",
    "cumulants",
    "levy_density",
    "kobol_classify",
    "asymptotic_normal_params",
    "annualized_daily_params",
    "esscher_tilted_params",
]


@dataclass(frozen=True)
class VGParams:
    """Parameter set (mu, delta, sigma, alpha, theta) of the VG model.

    mu     location, return units per unit model time
    delta  symmetry (negative values skew left)
    sigma  volatility of the Brownian component, > 0
    alpha  Gamma shape per unit model time, > 0
    theta  Gamma scale, > 0
    """

    mu: float
    delta: float
    sigma: float
    alpha: float
    theta: float

    def __post_init__(self):
        for name in ("mu", "delta", "sigma", "alpha", "theta"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value!r}")
        if self.sigma <= 0.0:
            raise ValidationError(f"sigma must be > 0, got {self.sigma!r}")
        if self.alpha <= 0.0:
            raise ValidationError(f"alpha must be > 0, got {self.alpha!r}")
        if self.theta <= 0.0:
            raise ValidationError(f"theta must be > 0, got {self.theta!r}")

    def quad(self, h):
        """Quadratic 1 - 0.5*theta*sigma^2*h^2 - delta*theta*h.

        Positive exactly on the MGF strip (h1, h2); its reciprocal powers
        appear in the MGF and in the Esscher-transformed scale.
        """
        return 1.0 - 0.5 * self.theta * self.sigma**2 * h * h - self.delta * self.theta * h

    def rescaled(self, c: float) -> "VGParams":
        """Parameters for c units of model time per output unit."""
        if c <= 0.0:
            raise ValidationError(f"time scale must be > 0, got {c!r}")
        return VGParams(self.mu * c, self.delta, self.sigma, self.alpha * c, self.theta)


class MgfStrip(NamedTuple):
    """Open interval (h1, h2) on which the MGF is finite; h1 < 0 < h2."""

    h1: float
    h2: float


class SteepnessPair(NamedTuple):
    """Exponential decay rates of the Levy-density tails; x2 < 0 < x1."""

    x1: float
    x2: float


class Cumulants(NamedTuple):
    """First four standardized moments at unit model time."""

    mean: float
    variance: float
    skewness: float
    excess_kurtosis: float

    @property
    def kurtosis(self) -> float:
        return self.excess_kurtosis + 3.0


class KoBoLClass(NamedTuple):
    """KoBoL/CGMY classification: order nu, intensities C+-, steepness lambda+-."""

    nu: float
    c_plus: float
    c_minus: float
    lam_plus: float
    lam_minus: float


def _discriminant_root(p: VGParams) -> float:
    """sqrt(delta^2/sigma^4 + 2/(theta sigma^2)); strictly positive."""
    s2 = p.sigma * p.sigma
    return math.sqrt((p.delta / s2) ** 2 + 2.0 / (p.theta * s2))


def mgf_strip(p: VGParams) -> MgfStrip:
    """Endpoints of the finite strip of the moment generating function."""
    root = _discriminant_root(p)
    base = -p.delta / (p.sigma * p.sigma)
    return MgfStrip(base - root, base + root)


def steepness(p: VGParams) -> SteepnessPair:
    """Tail decay rates of the Levy density; identically (-h1, -h2)."""
    root = _discriminant_root(p)
    base = p.delta / (p.sigma * p.sigma)
    return SteepnessPair(base + root, base - root)


def char_fn(p: VGParams, xi, t: float = 1.0):
    """Characteristic function E[exp(i xi Y_t)] for real frequencies.

    Accepts scalar or array xi; t >= 0.  The complex power is taken as
    exp(t*alpha*Log w) with the principal logarithm, which is safe here
    because Re w >= 1 for every real xi.
    """
    if t < 0.0:
        raise ValidationError(f"t must be >= 0, got {t!r}")
    xi = np.asarray(xi, dtype=complex)
    w = 1.0 - 1j * p.delta * p.theta * xi + 0.5 * p.sigma**2 * p.theta * xi * xi
    out = np.exp(1j * t * p.mu * xi - t * p.alpha * np.log(w))
    return out if out.ndim else complex(out)


def char_exponent(p: VGParams, z):
    """Characteristic exponent phi with E[exp(i z Y_t)] = exp(-t*phi(z)).

    phi(z) = -i*mu*z + alpha*Log(1 + 0.5*theta*sigma^2*z^2 - i*delta*theta*z)

    Valid for complex z with Im z inside (x2, x1), where the quadratic
    stays in the right half-plane and the principal branch is continuous
    along any horizontal contour.
    """
    z = np.asarray(z, dtype=complex)
    w = 1.0 + 0.5 * p.theta * p.sigma**2 * z * z - 1j * p.delta * p.theta * z
    bad = (np.real(w) <= 0.0) & (np.imag(w) == 0.0)
    if np.any(bad):
        raise BranchFailure("log argument crossed the branch cut on the requested contour")
    out = -1j * p.mu * z + p.alpha * np.log(w)
    return out if out.ndim else complex(out)


def mgf(p: VGParams, h: float, t: float = 1.0) -> float:
    """Moment generating function E[exp(h Y_t)] on the open strip (h1, h2)."""
    h1, h2 = mgf_strip(p)
    if not h1 < h < h2:
        raise OutOfStrip(f"h={h!r} outside MGF strip ({h1:.6f}, {h2:.6f})")
    return math.exp(t * p.mu * h) * p.quad(h) ** (-t * p.alpha)


def cumulants(p: VGParams) -> Cumulants:
    """Closed-form mean, variance, skewness and excess kurtosis at t=1.

    Derived from derivatives of K(h) = mu*h - alpha*log(quad(h)) at h=0:

        c1 = mu + alpha*theta*delta
        c2 = alpha*(theta^2*delta^2 + sigma^2*theta)
        c3 = alpha*theta^2*delta*(3*sigma^2 + 2*delta^2*theta)
        c4 = 3*alpha*theta^2*(sigma^4 + 4*sigma^2*delta^2*theta
                                       + 2*delta^4*theta^2)
    """
    mu, d, s, a, th = p.mu, p.delta, p.sigma, p.alpha, p.theta
    s2 = s * s
    c1 = mu + a * th * d
    c2 = a * (th * th * d * d + s2 * th)
    c3 = a * th * th * d * (3.0 * s2 + 2.0 * d * d * th)
    c4 = 3.0 * a * th * th * (s2 * s2 + 4.0 * s2 * d * d * th + 2.0 * d**4 * th * th)
    return Cumulants(c1, c2, c3 / c2**1.5, c4 / (c2 * c2))


def levy_density(p: VGParams, u):
    """Arrival rate of jumps of size u: alpha*exp(-x1*u)/u for u > 0,
    alpha*exp(-x2*u)/|u| for u < 0.  Diverges at u = 0."""
    x1, x2 = steepness(p)
    u = np.asarray(u, dtype=float)
    if np.any(u == 0.0):
        raise DomainError("Levy density diverges at u = 0")
    out = np.where(u > 0.0, np.exp(-x1 * u), np.exp(-x2 * u)) * (p.alpha / np.abs(u))
    return out if out.ndim else float(out)


def kobol_classify(p: VGParams) -> KoBoLClass:
    """Place the model inside the KoBoL/CGMY family: order 0, intensity
    alpha on both sides, steepness (x1, x2)."""
    x1, x2 = steepness(p)
    return KoBoLClass(0.0, p.alpha, p.alpha, x1, x2)


def asymptotic_normal_params(p: VGParams) -> tuple[float, float]:
    """Drift a and scale b of the normal law N(t*a, t*b^2) that Y_t
    approaches for large t."""
    c = cumulants(p)
    return c.mean, math.sqrt(c.variance)


def annualized_daily_params(
    p: VGParams, periods_per_year: float = 252.0, unit_scale: float = 100.0
) -> VGParams:
    """Convert parameters fitted to per-period returns in percent (such as
    daily 100*dlog(close)) to natural-log units per year.

    Scaling the return by 1/unit_scale scales mu, delta and sigma by the
    same factor; running periods_per_year periods per year scales mu and
    alpha.  The Gamma scale theta is unit-free.
    """
    if periods_per_year <= 0.0 or unit_scale <= 0.0:
        raise ValidationError("periods_per_year and unit_scale must be positive")
    c, s = periods_per_year, unit_scale
    return VGParams(p.mu * c / s, p.delta / s, p.sigma / s, p.alpha * c, p.theta)


def esscher_tilted_params(p: VGParams, h: float) -> VGParams:
    """Parameters after exponential tilting by h in the MGF strip.

    The tilted process is again VG with the same mu, sigma, alpha and

        delta~ = delta + h*sigma^2        theta~ = theta / quad(h)

    quad(h) > 0 on the strip, so theta~ stays positive.
    """
    h1, h2 = mgf_strip(p)
    if not h1 < h < h2:
        raise OutOfStrip(f"h={h!r} outside MGF strip ({h1:.6f}, {h2:.6f})")
    return VGParams(
        p.mu, p.delta + h * p.sigma**2, p.sigma, p.alpha, p.theta / p.quad(h)
    )
