"""Normalization constants and the shifted skew matrix.

For parameters (p, q) the package works with

    c = p*(1 - 2q)
    r = sqrt((1 + c)^2 * p * q + (1 - c)^2 * p * (1 - q))

and the real skew-symmetric matrix M = S + c*Y, where Y is the
all-ones-above-diagonal skew matrix.  The Hermitian matrix of interest is
-i*M / r; its eigenvalues are obtained by solving the real problem and
dividing by r, so no complex matrix is ever materialized.

The three-point law of an above-diagonal entry x = -i*(s + c)/r has exact
mean zero for every valid (p, q).  Its second absolute moment equals
1 + c^2*(1-p)/r^2, which is 1 exactly only when c = 0; the limit theorems
assume c -> 0, so callers must not expect unit variance for c != 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateNormalization
from .graph_model import SkewMatrix


@dataclass(frozen=True)
class NormalizationContext:
    """Derived constants c and r for one (p, q)."""

    p: float
    q: float
    c: float
    r: float

    def __post_init__(self):
        if not self.r > 0.0:
            raise DegenerateNormalization(
                f"r(p={self.p}, q={self.q}) must be positive, got {self.r}"
            )
        r2 = self.r_squared
        if abs(self.r * self.r - r2) > 1e-12 * r2:
            raise DegenerateNormalization(
                "r is inconsistent with its defining formula"
            )

    @property
    def r_squared(self) -> float:
        c = self.c
        return (1.0 + c) ** 2 * self.p * self.q + (1.0 - c) ** 2 * self.p * (1.0 - self.q)

    def to_json_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "c": self.c, "r": self.r}


@dataclass(frozen=True)
class ShiftMatrix:
    """The skew matrix with +1 above the diagonal and -1 below (kept implicit)."""

    n: int

    def materialize(self) -> np.ndarray:
        upper = np.triu(np.ones((self.n, self.n)), k=1)
        return upper - upper.T


@dataclass(frozen=True)
class EntryDistribution:
    """Three-point law of an above-diagonal entry of the normalized matrix.

    ``values`` correspond to the underlying states s = +1, -1, 0 and
    ``probabilities`` to (p*q, p*(1-q), 1-p).
    """

    values: tuple[complex, complex, complex]
    probabilities: tuple[float, float, float]

    @property
    def mean(self) -> complex:
        return sum(w * v for w, v in zip(self.probabilities, self.values))

    @property
    def second_abs_moment(self) -> float:
        return sum(w * abs(v) ** 2 for w, v in zip(self.probabilities, self.values))


def compute_context(p: float, q: float) -> NormalizationContext:
    """Compute c = p(1-2q) and r(p, q); reject r = 0.

    Raises DegenerateNormalization when both variance contributions vanish
    (p = 0, or p = 1 with q in {0, 1}), in which case the normalized matrix
    is undefined.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"q must lie in [0, 1], got {q!r}")
    c = p * (1.0 - 2.0 * q)
    r2 = (1.0 + c) ** 2 * p * q + (1.0 - c) ** 2 * p * (1.0 - q)
    if r2 <= 0.0:
        raise DegenerateNormalization(
            f"r(p={p}, q={q}) = 0: the normalized matrix is undefined"
        )
    return NormalizationContext(p=float(p), q=float(q), c=c, r=float(np.sqrt(r2)))


def shifted_skew_matrix(s: SkewMatrix, ctx: NormalizationContext) -> np.ndarray:
    """Form M = S + c*Y as a dense float64 skew-symmetric matrix.

    Entries above and below the diagonal are produced by the same additions
    up to an exact IEEE negation, so the output is skew-symmetric to exact
    floating equality.
    """
    m = s.entries.astype(np.float64)
    c = ctx.c
    if c != 0.0:
        iu, ju = np.triu_indices(s.n, k=1)
        m[iu, ju] += c
        m[ju, iu] -= c
    return m


def entry_distribution(ctx: NormalizationContext) -> EntryDistribution:
    """Support and probabilities of x = -i*(s + c)/r for s in {+1, -1, 0}."""
    c, r = ctx.c, ctx.r
    values = (
        complex(0.0, -(1.0 + c) / r),
        complex(0.0, (1.0 - c) / r),
        complex(0.0, -c / r),
    )
    probabilities = (ctx.p * ctx.q, ctx.p * (1.0 - ctx.q), 1.0 - ctx.p)
    return EntryDistribution(values=values, probabilities=probabilities)
