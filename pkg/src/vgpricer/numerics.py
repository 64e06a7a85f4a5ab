"""Reusable numeric kernels: FFT/fractional FFT, 12-point Newton-Cotes
composite quadrature, golden-section search, bracketed root solving, the
standard normal CDF, and oscillatory power-law tail integrals.

All kernels are pure and deterministic; summations use numpy's pairwise
reduction in a fixed order, so identical inputs give bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import special as sp

from .errors import (
    BracketError,
    FracRange,
    LengthError,
    NoBracket,
    NonFiniteSample,
    NumericalError,
    ValidationError,
)

__all__ = [
    "fft",
    "frft",
    "fourier_integral_grid",
    "NewtonCotesRule",
    "newton_cotes_12_weights",
    "newton_cotes_rule",
    "composite_integrate",
    "golden_minimize",
    "solve_monotone",
    "std_normal_cdf",
    "power_tail_integral",
    "next_pow2",
]


def _require_pow2(n: int) -> None:
    if n < 2 or n & (n - 1):
        raise LengthError(f"length must be a power of two >= 2, got {n}")


def next_pow2(m: float) -> int:
    """Smallest power of two >= m."""
    n = 2
    while n < m:
        n <<= 1
    return n


def fft(x, inverse: bool = False) -> np.ndarray:
    """Radix-2 DFT of a power-of-two-length complex sequence.

    Forward:  X_k = sum_j x_j exp(-2*pi*i*j*k/n)
    Inverse carries the 1/n factor, so fft(fft(x), inverse=True) == x.
    """
    x = np.asarray(x, dtype=complex)
    _require_pow2(x.size)
    return np.fft.ifft(x) if inverse else np.fft.fft(x)


def frft(x, frac: float) -> np.ndarray:
    """Fractional DFT  G_k = sum_j x_j exp(-2*pi*i*j*k*frac),  k = 0..n-1.

    Computed in O(n log n) by chirp factorization
    exp(-2*pi*i*j*k*f) = exp(-i*pi*f*j^2) exp(-i*pi*f*k^2) exp(i*pi*f*(j-k)^2)
    i.e. pre/post chirp multiplies around a 2n-point circular convolution.
    """
    x = np.asarray(x, dtype=complex)
    n = x.size
    _require_pow2(n)
    if not -1.0 < frac < 1.0:
        raise FracRange(f"fractional parameter must satisfy |frac| < 1, got {frac!r}")

    j = np.arange(n, dtype=float)
    jsq = j * j
    down = np.exp(-1j * math.pi * frac * jsq)

    y = np.zeros(2 * n, dtype=complex)
    y[:n] = x * down

    # Circular chirp: index m encodes displacement m for m < n and m - 2n after.
    disp = np.arange(2 * n, dtype=float)
    disp[n:] -= 2.0 * n
    z = np.exp(1j * math.pi * frac * disp * disp)

    conv = np.fft.ifft(np.fft.fft(y) * np.fft.fft(z))[:n]
    return down * conv


def fourier_integral_grid(
    g: np.ndarray, gamma: float, xi0: float, x0: float, beta: float
) -> np.ndarray:
    """Evaluate F(x_k) = (gamma/2pi) * sum_j g_j exp(i*xi_j*x_k) by one FRFT.

    g holds samples of the integrand at xi_j = xi0 + j*gamma (j = 0..n-1);
    the outputs sit at x_k = x0 + k*beta (k = 0..n-1).  This is the Riemann
    sum for (1/2pi) * Integral exp(i*xi*x) g(xi) dxi with independently
    chosen input and output spacings (fractional parameter beta*gamma/2pi).
    """
    g = np.asarray(g, dtype=complex)
    n = g.size
    if gamma <= 0.0 or beta <= 0.0:
        raise ValidationError("gamma and beta must be positive")
    frac = beta * gamma / (2.0 * math.pi)
    j = np.arange(n, dtype=float)
    pre = g * np.exp(1j * (gamma * x0) * j)
    kernel = frft(pre, -frac)
    xk = x0 + beta * np.arange(n, dtype=float)
    return (gamma / (2.0 * math.pi)) * np.exp(1j * xi0 * xk) * kernel


# ---------------------------------------------------------------------------
# Composite Newton-Cotes quadrature
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _closed_newton_cotes_fractions(q: int) -> tuple[Fraction, ...]:
    """Exact weights W_j = Integral_0^q of the j-th Lagrange basis poly.

    Computed in rational arithmetic, so symmetry W_j == W_{q-j} and the
    normalization sum(W) == q hold exactly.
    """
    weights = []
    for jnode in range(q + 1):
        # Coefficients of prod_{m != j} (x - m) in ascending powers.
        coeffs = [Fraction(1)]
        for m in range(q + 1):
            if m == jnode:
                continue
            new = [Fraction(0)] * (len(coeffs) + 1)
            for k, c in enumerate(coeffs):
                new[k + 1] += c
                new[k] -= c * m
            coeffs = new
        denom = Fraction(1)
        for m in range(q + 1):
            if m != jnode:
                denom *= jnode - m
        integral = sum(
            c * Fraction(q) ** (k + 1) / (k + 1) for k, c in enumerate(coeffs)
        )
        weights.append(integral / denom)
    return tuple(weights)


def newton_cotes_12_weights() -> np.ndarray:
    """The 13 weights of the closed 12-point rule, normalized to sum to 12."""
    return np.array([float(w) for w in _closed_newton_cotes_fractions(12)])


@dataclass(frozen=True)
class NewtonCotesRule:
    """Composite closed Newton-Cotes rule on [a, b] with `panels` panels of
    q subintervals each; exact for polynomials of degree q + 1 per panel
    when q is even."""

    a: float
    b: float
    panels: int
    q: int = 12
    weights: np.ndarray = field(default=None, repr=False)  # type: ignore[assignment]

    def __post_init__(self):
        if self.panels < 1:
            raise ValidationError(f"panels must be >= 1, got {self.panels}")
        if not self.b > self.a:
            raise ValidationError(f"need b > a, got [{self.a}, {self.b}]")
        if self.weights is None:
            w = np.array([float(v) for v in _closed_newton_cotes_fractions(self.q)])
            object.__setattr__(self, "weights", w)

    @property
    def n_sub(self) -> int:
        return self.q * self.panels

    @property
    def step(self) -> float:
        return (self.b - self.a) / self.n_sub

    def nodes(self) -> np.ndarray:
        return self.a + self.step * np.arange(self.n_sub + 1, dtype=float)

    def node_weights(self) -> np.ndarray:
        """Per-node weights of the composite sum (interior panel joints get
        2*W_0), scaled by the step, so the integral is dot(node_weights, f)."""
        w = np.zeros(self.n_sub + 1)
        for panel in range(self.panels):
            w[panel * self.q : panel * self.q + self.q + 1] += self.weights
        return w * self.step


def composite_integrate(f: Callable[[np.ndarray], np.ndarray], rule: NewtonCotesRule) -> float:
    """Composite Newton-Cotes integral of f over [rule.a, rule.b].

    f must accept a node vector and return finite values; a NaN or infinity
    at any node raises NonFiniteSample.
    """
    x = rule.nodes()
    y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        raise ValidationError("integrand must return one value per node")
    if not np.all(np.isfinite(y)):
        bad = x[~np.isfinite(y)][0]
        raise NonFiniteSample(f"integrand not finite at node {bad!r}")
    return float(np.dot(rule.node_weights(), y))


# ---------------------------------------------------------------------------
# Scalar search
# ---------------------------------------------------------------------------

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_minimize(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-8) -> float:
    """Golden-section argmin of a unimodal f on [lo, hi], to within tol."""
    if not lo < hi:
        raise BracketError(f"need lo < hi, got [{lo}, {hi}]")
    if tol <= 0.0:
        raise ValidationError(f"tol must be > 0, got {tol!r}")
    a, b = lo, hi
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def solve_monotone(
    f: Callable[[float], float],
    target: float,
    lo: float,
    hi: float,
    tol: float = 1e-12,
) -> float:
    """Bisection solve of f(x) == target for strictly monotone f on (lo, hi).

    Endpoints are probed a relative 1e-12 inside the bracket, so f may
    diverge at lo and hi themselves.  Raises NoBracket when the target is
    outside the probed range.
    """
    if not lo < hi:
        raise BracketError(f"need lo < hi, got [{lo}, {hi}]")
    guard = 1e-12 * (hi - lo)
    a, b = lo + guard, hi - guard
    fa, fb = f(a), f(b)
    increasing = fb >= fa
    low_val, high_val = (fa, fb) if increasing else (fb, fa)
    if not low_val <= target <= high_val:
        raise NoBracket(
            f"target {target!r} outside function range [{low_val!r}, {high_val!r}]"
        )

    best_x, best_res = a, abs(fa - target)
    if abs(fb - target) < best_res:
        best_x, best_res = b, abs(fb - target)
    for _ in range(400):
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = f(m)
        res = abs(fm - target)
        if res < best_res:
            best_x, best_res = m, res
        if (fm < target) == increasing:
            a = m
        else:
            b = m
    if best_res <= tol:
        return best_x
    raise NumericalError(
        f"bisection stalled at residual {best_res!r} > tol {tol!r}"
    )


def std_normal_cdf(x):
    """Double-precision standard normal CDF via the complementary error
    function; accepts scalars or arrays."""
    out = sp.ndtr(np.asarray(x, dtype=float))
    return out if out.ndim else float(out)


# ---------------------------------------------------------------------------
# Oscillatory power-law tails
# ---------------------------------------------------------------------------

_LAGUERRE_NODES = 96


@lru_cache(maxsize=None)
def _laggauss(n: int):
    return np.polynomial.laguerre.laggauss(n)


def power_tail_integral(s, p: float, big_a: float) -> np.ndarray:
    """Integral_A^inf exp(i*s*xi) * xi^(-p) dxi for real s, p > 1 or s != 0.

    Evaluated by rotating the contour to xi = B + i*v*sign(s), where the
    integrand decays like exp(-|s| v), then Gauss-Laguerre quadrature.
    When |s|*A is small the rotation point B is pushed out so the rotated
    part keeps a dozen radians of phase, and [A, B] is covered by
    Gauss-Legendre.  Used to append analytic tails to truncated Fourier
    inversions of power-law characteristic functions.
    """
    if big_a <= 0.0:
        raise ValidationError(f"need A > 0, got {big_a!r}")
    s = np.atleast_1d(np.asarray(s, dtype=float))
    out = np.empty(s.shape, dtype=complex)

    zero = s == 0.0
    if np.any(zero):
        if p <= 1.0:
            raise ValidationError("tail integral diverges for s = 0 and p <= 1")
        out[zero] = big_a ** (1.0 - p) / (p - 1.0)

    lag_x, lag_w = _laggauss(_LAGUERRE_NODES)
    leg_x, leg_w = np.polynomial.legendre.leggauss(64)
    for sign in (1.0, -1.0):
        m = (s * sign) > 0.0
        if not np.any(m):
            continue
        sa = np.abs(s[m])
        # Rotation point: far enough out that the rotated integrand carries
        # at least ~12 radians of decay scale relative to its variation.
        big_b = np.maximum(big_a, 12.0 / sa)
        sb = sa * big_b
        u = lag_x[None, :] / sb[:, None]
        h = (1.0 + 1j * sign * u) ** (-p)
        rotated = (h * lag_w[None, :]).sum(axis=1)
        vals = 1j * sign * np.exp(1j * sign * sb) * big_b ** (1.0 - p) * rotated / sb

        bridge = big_b > big_a
        if np.any(bridge):
            half = 0.5 * (big_b[bridge] - big_a)
            mid = 0.5 * (big_b[bridge] + big_a)
            xi = mid[:, None] + half[:, None] * leg_x[None, :]
            f = np.exp(1j * sign * sa[bridge, None] * xi) * xi ** (-p)
            vals[bridge] += half * (f * leg_w[None, :]).sum(axis=1)
        out[m] = vals
    return out
