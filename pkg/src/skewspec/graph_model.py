"""Randomly oriented Erdos-Renyi graphs and their skew-adjacency matrices.

Each unordered pair {i, j}, i < j, independently becomes an arc (i, j) with
probability p*q, an arc (j, i) with probability p*(1-q), and stays absent
with probability 1-p.  Sampling is driven by a counter-based Philox stream
keyed on (master_seed, replica_index), so every draw is a pure function of
(master_seed, replica_index, pair index) on every platform.

Vertices are 0-based internally; the text serialization and the CLI use
1-based labels.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .errors import SkewSpecError

ARC_HEADER_PREFIX = "# skewspec arcs n="


@dataclass(frozen=True)
class GraphParams:
    """Model parameters: n vertices, edge probability p, orientation probability q."""

    n: int
    p: float
    q: float

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p!r}")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"q must lie in [0, 1], got {self.q!r}")


@dataclass(frozen=True)
class SeedSpec:
    """Identifies one reproducible sampling stream.

    The stream is the Philox (4x64) counter-based generator with 128-bit key
    (master_seed, replica_index).  Distinct replica indices therefore give
    statistically independent streams, and draw t of a stream never depends
    on how many threads or processes are running.
    """

    master_seed: int
    replica_index: int = 0

    def __post_init__(self):
        if not 0 <= int(self.master_seed) < 2**64:
            raise ValueError("master_seed must fit in an unsigned 64-bit integer")
        if not 0 <= int(self.replica_index) < 2**64:
            raise ValueError("replica_index must be a non-negative 64-bit integer")

    def generator(self) -> np.random.Generator:
        key = np.array([self.master_seed, self.replica_index], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True, eq=False)
class OrientedGraph:
    """A sampled orientation: n vertices and an (m, 2) array of arcs (tail, head).

    Arcs are 0-based, lexicographically sorted, with no self-loops and at most
    one direction per unordered pair.
    """

    n: int
    arcs: np.ndarray = field(repr=False)

    def __post_init__(self):
        a = np.asarray(self.arcs, dtype=np.int64).reshape(-1, 2)
        object.__setattr__(self, "arcs", a)
        if a.size and (a.min() < 0 or a.max() >= self.n):
            raise SkewSpecError("arc endpoint out of range")
        if np.any(a[:, 0] == a[:, 1]):
            raise SkewSpecError("self-loop in arc list")
        lo = np.minimum(a[:, 0], a[:, 1])
        hi = np.maximum(a[:, 0], a[:, 1])
        pair_ids = lo * self.n + hi
        if len(np.unique(pair_ids)) != len(pair_ids):
            raise SkewSpecError("duplicate or two-cycle pair in arc list")

    @property
    def num_arcs(self) -> int:
        return self.arcs.shape[0]

    def arc_set(self) -> set[tuple[int, int]]:
        return {(int(i), int(j)) for i, j in self.arcs}


@dataclass(frozen=True, eq=False)
class SkewMatrix:
    """Dense skew-adjacency matrix with int8 entries in {-1, 0, +1}."""

    n: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        e = self.entries
        if e.shape != (self.n, self.n):
            raise SkewSpecError(f"entries must be {self.n}x{self.n}")
        if e.dtype != np.int8:
            raise SkewSpecError("entries must be int8")
        if np.any(e != -e.T):
            raise SkewSpecError("entries are not skew-symmetric")

    def to_float(self) -> np.ndarray:
        return self.entries.astype(np.float64)


def sample_graph(params: GraphParams, seed: SeedSpec) -> OrientedGraph:
    """Sample one randomly oriented graph.

    One uniform draw per unordered pair, visited in lexicographic (i, j),
    i < j order: u < p*q orients low-to-high, p*q <= u < p orients
    high-to-low, u >= p leaves the pair empty.
    """
    n, p, q = params.n, params.p, params.q
    rng = seed.generator()
    iu, ju = np.triu_indices(n, k=1)
    u = rng.random(iu.shape[0])
    pq = p * q
    fwd = u < pq
    bwd = (u >= pq) & (u < p)
    tails = np.concatenate([iu[fwd], ju[bwd]])
    heads = np.concatenate([ju[fwd], iu[bwd]])
    arcs = np.stack([tails, heads], axis=1)
    order = np.lexsort((arcs[:, 1], arcs[:, 0]))
    return OrientedGraph(n=n, arcs=arcs[order])


def skew_adjacency(g: OrientedGraph) -> SkewMatrix:
    """Build the skew-adjacency matrix: +1 at (i, j) and -1 at (j, i) per arc (i, j)."""
    entries = np.zeros((g.n, g.n), dtype=np.int8)
    if g.num_arcs:
        t = g.arcs[:, 0]
        h = g.arcs[:, 1]
        entries[t, h] = 1
        entries[h, t] = -1
    return SkewMatrix(n=g.n, entries=entries)


def write_arcs(g: OrientedGraph, fp) -> None:
    """Write the edge-list text format: header line, then one 1-based 'i\\tj' per arc."""
    fp.write(f"{ARC_HEADER_PREFIX}{g.n}\n")
    for i, j in g.arcs:
        fp.write(f"{i + 1}\t{j + 1}\n")


def read_arcs(fp) -> OrientedGraph:
    """Parse the edge-list text format produced by :func:`write_arcs`."""
    header = fp.readline().strip()
    if not header.startswith(ARC_HEADER_PREFIX):
        raise SkewSpecError(f"missing arc-list header, got {header!r}")
    n = int(header[len(ARC_HEADER_PREFIX):])
    arcs = []
    for line in fp:
        line = line.strip()
        if not line:
            continue
        i_s, j_s = line.split()
        arcs.append((int(i_s) - 1, int(j_s) - 1))
    a = np.array(arcs, dtype=np.int64).reshape(-1, 2)
    return OrientedGraph(n=n, arcs=a)


def dumps_arcs(g: OrientedGraph) -> str:
    buf = io.StringIO()
    write_arcs(g, buf)
    return buf.getvalue()


def loads_arcs(text: str) -> OrientedGraph:
    return read_arcs(io.StringIO(text))
