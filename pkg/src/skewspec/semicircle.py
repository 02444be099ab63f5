"""Closed-form reference for the standard semicircular law on [-2, 2].

Density f(x) = sqrt(4 - x^2)/(2*pi); even moments are the Catalan numbers,
odd moments vanish.  The CDF below is the closed-form antiderivative of f
(validated against quadrature in the test suite).
"""

from __future__ import annotations

import math

import numpy as np

from .spectral import ESD


def catalan(t: int) -> int:
    """The t-th Catalan number binom(2t, t)/(t+1), exactly."""
    if t < 0:
        raise ValueError("t must be non-negative")
    return math.comb(2 * t, t) // (t + 1)


def pdf(x):
    """Semicircle density: sqrt(4 - x^2)/(2*pi) on |x| <= 2, else 0."""
    xa = np.asarray(x, dtype=np.float64)
    inside = np.abs(xa) <= 2.0
    vals = np.where(inside, np.sqrt(np.maximum(4.0 - xa * xa, 0.0)) / (2.0 * math.pi), 0.0)
    if np.isscalar(x):
        return float(vals)
    return vals


def cdf(x):
    """Semicircle CDF: 1/2 + x*sqrt(4-x^2)/(4*pi) + arcsin(x/2)/pi on [-2, 2]."""
    xa = np.asarray(x, dtype=np.float64)
    xc = np.clip(xa, -2.0, 2.0)
    vals = 0.5 + xc * np.sqrt(np.maximum(4.0 - xc * xc, 0.0)) / (4.0 * math.pi) \
        + np.arcsin(xc / 2.0) / math.pi
    vals = np.where(xa <= -2.0, 0.0, np.where(xa >= 2.0, 1.0, vals))
    if np.isscalar(x):
        return float(vals)
    return vals


def moment(k: int) -> float:
    """k-th moment of the semicircle: 0 for odd k, Catalan(k/2) for even k."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k % 2 == 1:
        return 0.0
    return float(catalan(k // 2))


def ks_distance(e: ESD) -> float:
    """sup_x |F_e(x) - F(x)|, evaluated exactly at the sample-point jumps.

    For a step CDF against a continuous CDF the supremum is attained at a
    jump, approaching from the left or the right, so both one-sided gaps
    are taken at every sample point.
    """
    n = e.n
    xs = e.points
    f = cdf(xs)
    steps = np.arange(1, n + 1, dtype=np.float64) / n
    d_plus = float(np.max(steps - f))
    d_minus = float(np.max(f - (steps - 1.0 / n)))
    return max(d_plus, d_minus, 0.0)


def empirical_moment(e: ESD, k: int) -> float:
    """(1/n) * sum of x_i^k over the sample points."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return float(np.mean(e.points ** k))
