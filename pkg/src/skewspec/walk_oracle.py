"""Exact combinatorial oracles for the closed-walk trace expansion.

The k-th trace moment of the normalized matrix expands into a sum over
closed walks (i_1, ..., i_k) in the complete graph; each walk's expectation
factorizes over its distinct unordered pairs.  This module classifies walks
by the parity structure of their edge traversal counts, enumerates the
tree walks that carry the leading contribution, evaluates exact entry
moments of the three-point law, and computes the tiny-n trace moment by two
independent routes (exhaustive configuration enumeration and the walk sum),
optionally in exact rational arithmetic.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import ensemble as _ensemble
from .errors import (
    DegenerateNormalization,
    EnumerationBoundExceeded,
    MalformedWalk,
    SkewSpecError,
)
from .graph_model import GraphParams, SeedSpec
from .normalization import NormalizationContext, compute_context

MAX_TREE_WALK_T = 6
MAX_TINY_N = 4
MAX_TINY_K = 8

_MINUS_I_POW = (1 + 0j, -1j, -1 + 0j, 1j)  # (-i)^k for k mod 4 = 0, 1, 2, 3


@dataclass(frozen=True)
class Walk:
    """A closed walk (i_1, ..., i_k); the step back from i_k to i_1 is implied.

    Consecutive vertices, including the wrap-around, must be distinct: the
    matrix has zero diagonal, so walks with a repeated consecutive vertex
    contribute nothing and are excluded.
    """

    vertices: tuple[int, ...]

    def __post_init__(self):
        verts = tuple(int(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        k = len(verts)
        if k < 1:
            raise MalformedWalk("walk must have length >= 1")
        for a, b in zip(verts, verts[1:] + verts[:1]):
            if a == b:
                raise MalformedWalk(f"consecutive repeat of vertex {a}")

    @property
    def k(self) -> int:
        return len(self.vertices)

    def steps(self) -> list[tuple[int, int]]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]


@dataclass(frozen=True)
class WalkClassification:
    """Distinct-vertex count m, per-pair traversal counts, odd-parity set, case label."""

    m: int
    edge_multiplicities: dict[tuple[int, int], int] = field(repr=False)
    omega: frozenset[tuple[int, int]]
    case_label: str


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def classify_walk(w: Walk) -> WalkClassification:
    """Assign a closed walk to exactly one of the cases A1, A2, B1, B2, B3.

    Odd length: A1 if some odd-count pair is traversed exactly once, else A2.
    Even length k = 2t: B1 if some pair has odd traversal count; otherwise
    B2 when the walk uses m <= t distinct vertices and B3 when m = t + 1.
    A B3 walk is additionally verified to traverse each arc and its reverse
    exactly once with its edges forming a tree.
    """
    k = w.k
    mult: dict[tuple[int, int], int] = {}
    directed: dict[tuple[int, int], int] = {}
    for a, b in w.steps():
        key = (a, b) if a < b else (b, a)
        mult[key] = mult.get(key, 0) + 1
        directed[(a, b)] = directed.get((a, b), 0) + 1
    m = len(set(w.vertices))
    omega = frozenset(pair for pair, c in mult.items() if c % 2 == 1)

    if k % 2 == 1:
        if not omega:
            raise SkewSpecError("odd closed walk with no odd-count edge")
        label = "A1" if any(mult[pair] == 1 for pair in omega) else "A2"
    else:
        t = k // 2
        if omega:
            label = "B1"
        elif m <= t:
            label = "B2"
        elif m == t + 1:
            label = "B3"
            _verify_tree_walk(w, mult, directed, m)
        else:
            raise SkewSpecError(f"even walk with m={m} > k/2+1={t + 1}")
    return WalkClassification(
        m=m, edge_multiplicities=mult, omega=omega, case_label=label
    )


def _verify_tree_walk(w: Walk, mult, directed, m: int) -> None:
    for (a, b), c in mult.items():
        if c != 2 or directed.get((a, b), 0) != 1 or directed.get((b, a), 0) != 1:
            raise SkewSpecError(
                "B3 walk must traverse each arc and its reverse exactly once"
            )
    if len(mult) != m - 1:
        raise SkewSpecError("B3 walk edge count is not m - 1")
    uf = _UnionFind(set(w.vertices))
    for a, b in mult:
        if not uf.union(a, b):
            raise SkewSpecError("B3 walk edges contain a cycle")


def count_tree_walks(t: int) -> int:
    """Count closed walks of length 2t using all of {1, ..., t+1} where each
    arc and its reverse are traversed exactly once and the edges form a tree.

    Brute-force depth-first enumeration over vertex sequences with
    feasibility pruning; the count equals Catalan(t) * (t+1)!.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    if t > MAX_TREE_WALK_T:
        raise EnumerationBoundExceeded(
            f"tree-walk enumeration is bounded at t <= {MAX_TREE_WALK_T}"
        )
    nv = t + 1
    length = 2 * t
    used = [[False] * nv for _ in range(nv)]
    seen = [False] * nv
    count = 0

    def dfs(pos: int, cur: int, start: int, open_arcs: int, visited: int) -> int:
        if pos == length:
            # closing step cur -> start must complete the last open pair
            if (
                cur != start
                and not used[cur][start]
                and used[start][cur]
                and open_arcs == 1
                and visited == nv
            ):
                return 1
            return 0
        total = 0
        steps_after = length - pos  # steps left after this one, incl. the closing step
        for v in range(nv):
            if v == cur or used[cur][v]:
                continue
            closes = used[v][cur]
            new_open = open_arcs - 1 if closes else open_arcs + 1
            new_visited = visited if seen[v] else visited + 1
            # every open pair needs a closing step; every unvisited vertex
            # needs an opening step plus its closing step
            if new_open + 2 * (nv - new_visited) > steps_after:
                continue
            used[cur][v] = True
            was_seen = seen[v]
            seen[v] = True
            total += dfs(pos + 1, v, start, new_open, new_visited)
            used[cur][v] = False
            seen[v] = was_seen
        return total

    for start in range(nv):
        seen[start] = True
        count += dfs(1, start, start, 0, 1)
        seen[start] = False
    return count


def exact_entry_moment(ctx: NormalizationContext, k: int) -> complex:
    """Exact E(x^k) for the three-point entry law x = -i*(s + c)/r.

    E(x^k) = (-i)^k * (p*q*(1+c)^k + p*(1-q)*(c-1)^k + (1-p)*c^k) / r^k.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    c = ctx.c
    base = (
        ctx.p * ctx.q * (1.0 + c) ** k
        + ctx.p * (1.0 - ctx.q) * (c - 1.0) ** k
        + (1.0 - ctx.p) * c**k
    )
    r_pow = ctx.r_squared ** (k // 2) * (ctx.r if k % 2 else 1.0)
    return _MINUS_I_POW[k % 4] * (base / r_pow)


def _check_tiny_bounds(n: int, k: int) -> None:
    if k < 1:
        raise ValueError("k must be >= 1")
    if n > MAX_TINY_N or k > MAX_TINY_K:
        raise EnumerationBoundExceeded(
            f"exhaustive trace oracle is bounded at n <= {MAX_TINY_N}, k <= {MAX_TINY_K}"
        )


def trace_moment_exact_tiny(params: GraphParams, k: int) -> float:
    """Exact (1/n^(1+k/2)) * E(Trace(X^k)) by exhausting all edge configurations.

    Every assignment of upper-triangle states in {+1, -1, 0} is enumerated
    with its probability weight; the complex normalized matrix is powered
    and traced per configuration.  Accumulation uses compensated summation;
    the imaginary part must vanish to 1e-12.
    """
    n = params.n
    _check_tiny_bounds(n, k)
    ctx = compute_context(params.p, params.q)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    state_probs = {1: params.p * params.q, -1: params.p * (1.0 - params.q), 0: 1.0 - params.p}
    re_terms = []
    im_terms = []
    for states in itertools.product((1, -1, 0), repeat=len(pairs)):
        weight = 1.0
        for s in states:
            weight *= state_probs[s]
        m = np.zeros((n, n))
        for (i, j), s in zip(pairs, states):
            m[i, j] = s + ctx.c
            m[j, i] = -(s + ctx.c)
        x = m * (-1j / ctx.r)
        tr = complex(np.trace(np.linalg.matrix_power(x, k)))
        re_terms.append(weight * tr.real)
        im_terms.append(weight * tr.imag)
    scale = float(n) ** (1.0 + 0.5 * k)
    imag = math.fsum(im_terms) / scale
    if abs(imag) > 1e-12:
        raise SkewSpecError(f"trace moment has non-real value (imag {imag:.3e})")
    return math.fsum(re_terms) / scale


def _walk_terms(n: int, k: int, pair_term) -> list:
    """Sum pair_term products over all closed walks of length k in K_n.

    ``pair_term(total, reversed_count)`` gives one unordered pair's factor.
    Walks with a consecutive repeat are never generated.
    """
    counts: dict[tuple[int, int], list[int]] = {}
    terms = []

    def add_step(a: int, b: int):
        key = (a, b) if a < b else (b, a)
        c = counts.setdefault(key, [0, 0])
        c[0] += 1
        if a > b:
            c[1] += 1

    def remove_step(a: int, b: int):
        key = (a, b) if a < b else (b, a)
        c = counts[key]
        c[0] -= 1
        if a > b:
            c[1] -= 1
        if c[0] == 0:
            del counts[key]

    def dfs(pos: int, cur: int, start: int):
        if pos == k:
            if cur == start:
                return
            add_step(cur, start)
            term = None
            for (total, rev) in counts.values():
                f = pair_term(total, rev)
                term = f if term is None else term * f
            terms.append(term)
            remove_step(cur, start)
            return
        for v in range(n):
            if v == cur:
                continue
            add_step(cur, v)
            dfs(pos + 1, v, start)
            remove_step(cur, v)

    for start in range(n):
        dfs(1, start, start)
    return terms


def trace_moment_walk_sum(params: GraphParams, k: int) -> float:
    """The same trace moment via the closed-walk sum with per-pair factorization.

    Each walk's expectation is the product over its distinct unordered pairs
    of (-1)^(reversed traversals) * E(x^total traversals); independent of
    :func:`trace_moment_exact_tiny` except for the shared entry law.
    """
    n = params.n
    _check_tiny_bounds(n, k)
    ctx = compute_context(params.p, params.q)
    moments = [None] + [exact_entry_moment(ctx, j) for j in range(1, k + 1)]

    def pair_term(total: int, rev: int) -> complex:
        sign = -1.0 if rev % 2 else 1.0
        return sign * moments[total]

    terms = _walk_terms(n, k, pair_term)
    scale = float(n) ** (1.0 + 0.5 * k)
    imag = math.fsum(t.imag for t in terms) / scale
    if abs(imag) > 1e-12:
        raise SkewSpecError(f"walk sum has non-real value (imag {imag:.3e})")
    return math.fsum(t.real for t in terms) / scale


# ---------------------------------------------------------------------------
# exact-rational mode


class _QComplex:
    """Gaussian rational a + b*i with Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __mul__(self, other):
        return _QComplex(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __add__(self, other):
        return _QComplex(self.re + other.re, self.im + other.im)


def _rational_context(p: Fraction, q: Fraction) -> tuple[Fraction, Fraction]:
    """(c, r^2) as exact rationals; rejects the degenerate case."""
    p, q = Fraction(p), Fraction(q)
    if not (0 <= p <= 1 and 0 <= q <= 1):
        raise ValueError("p and q must lie in [0, 1]")
    c = p * (1 - 2 * q)
    r2 = (1 + c) ** 2 * p * q + (1 - c) ** 2 * p * (1 - q)
    if r2 == 0:
        raise DegenerateNormalization("r(p, q) = 0 in rational mode")
    return c, r2


def _entry_moment_scaled_rational(c: Fraction, p: Fraction, q: Fraction, j: int) -> _QComplex:
    """Exact E((r*x)^j) = (-i)^j * (p*q*(1+c)^j + p*(1-q)*(c-1)^j + (1-p)*c^j)."""
    base = p * q * (1 + c) ** j + p * (1 - q) * (c - 1) ** j + (1 - p) * c**j
    rem = j % 4
    if rem == 0:
        return _QComplex(base, 0)
    if rem == 1:
        return _QComplex(0, -base)
    if rem == 2:
        return _QComplex(-base, 0)
    return _QComplex(0, base)


def trace_moment_walk_sum_rational(n: int, k: int, p, q) -> Fraction:
    """Bit-exact walk-sum trace moment for rational p, q (even k; odd k gives 0)."""
    _check_tiny_bounds(n, k)
    p, q = Fraction(p), Fraction(q)
    c, r2 = _rational_context(p, q)
    moments = [None] + [
        _entry_moment_scaled_rational(c, p, q, j) for j in range(1, k + 1)
    ]

    def pair_term(total: int, rev: int) -> _QComplex:
        m = moments[total]
        if rev % 2:
            return _QComplex(-m.re, -m.im)
        return m

    terms = _walk_terms(n, k, pair_term)
    total_re = sum((t.re for t in terms), Fraction(0))
    total_im = sum((t.im for t in terms), Fraction(0))
    if total_im != 0:
        raise SkewSpecError("rational walk sum has non-real value")
    if k % 2 == 1:
        if total_re != 0:
            raise SkewSpecError("odd-k rational walk sum must vanish")
        return Fraction(0)
    return total_re / (r2 ** (k // 2) * Fraction(n) ** (1 + k // 2))


def trace_moment_exact_tiny_rational(n: int, k: int, p, q) -> Fraction:
    """Bit-exact configuration-enumeration trace moment for rational p, q.

    Works on the real shifted matrix: Trace(X^k) = (-1)^(k/2) Trace(M^k)/r^k
    for even k, and vanishes identically for odd k.
    """
    _check_tiny_bounds(n, k)
    p, q = Fraction(p), Fraction(q)
    c, r2 = _rational_context(p, q)
    if k % 2 == 1:
        return Fraction(0)
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    state_probs = {1: p * q, -1: p * (1 - q), 0: 1 - p}
    total = Fraction(0)
    for states in itertools.product((1, -1, 0), repeat=len(pairs)):
        weight = Fraction(1)
        for s in states:
            weight *= state_probs[s]
        m = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), s in zip(pairs, states):
            m[i][j] = s + c
            m[j][i] = -(s + c)
        power = m
        for _ in range(k - 1):
            power = _frac_matmul(power, m, n)
        tr = sum((power[i][i] for i in range(n)), Fraction(0))
        total += weight * tr
    sign = -1 if (k // 2) % 2 else 1
    return sign * total / (r2 ** (k // 2) * Fraction(n) ** (1 + k // 2))


def _frac_matmul(a, b, n):
    out = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for l in range(n):
            ail = ai[l]
            if ail:
                bl = b[l]
                for j in range(n):
                    oi[j] += ail * bl[j]
    return out


@dataclass(frozen=True)
class MCEstimate:
    """Monte Carlo mean with its standard error."""

    mean: float
    stderr: float
    replicas: int


def trace_moment_mc(
    params: GraphParams, k: int, replicas: int, seed: int
) -> MCEstimate:
    """Monte Carlo estimate of the k-th moment of the scaled spectrum.

    Averages (1/n) * sum_i (lambda_i / (r*sqrt(n)))^k over sampled graphs;
    the standard error is the replica standard deviation over sqrt(replicas).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if replicas < 2:
        raise ValueError("need at least 2 replicas for a standard error")
    values = np.empty(replicas)
    for idx in range(replicas):
        spec = _ensemble.replica_spectrum(params, SeedSpec(seed, idx))
        values[idx] = np.mean(spec.lambdas**k)
    mean = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / math.sqrt(replicas))
    return MCEstimate(mean=mean, stderr=stderr, replicas=replicas)
