"""Parallel Monte Carlo driver: sample -> shift -> eigensolve -> aggregate.

Replicas are independent tasks, each owning the stream derived from
(master_seed, replica_index); results are merged in replica-index order, so
every numeric field of the report is a deterministic function of the
configuration alone, independent of the worker count (the recorded wall
clock and per-replica timings are diagnostics and obviously are not).

The worker pool is thread-based: the eigensolver kernels release the GIL.
``SKEWSPEC_THREADS`` caps the pool size (default: hardware parallelism).
"""

from __future__ import annotations

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import semicircle
from .errors import InvalidConfig
from .graph_model import GraphParams, SeedSpec, sample_graph, skew_adjacency
from .normalization import NormalizationContext, compute_context, shifted_skew_matrix
from .spectral import ESD, Spectrum, WeylReport, eig_skew, weyl_bounds


def _fmt(x: float) -> float:
    """Round-trip a float through 17-significant-digit decimal text.

    17 significant digits determine a double uniquely, so this is lossless;
    it pins the JSON serialization precision contract explicitly.
    """
    return float(format(float(x), ".17g"))


def worker_count(default: int | None = None) -> int:
    env = os.environ.get("SKEWSPEC_THREADS")
    if env:
        w = int(env)
        if w < 1:
            raise InvalidConfig("SKEWSPEC_THREADS must be >= 1")
        return w
    if default is not None:
        return default
    return os.cpu_count() or 1


@dataclass(frozen=True)
class EnsembleConfig:
    """One ensemble experiment: model parameters plus aggregation settings."""

    params: GraphParams
    replicas: int
    master_seed: int
    bins: int = 60
    bin_range: tuple[float, float] = (-2.5, 2.5)
    epsilon_weyl: float = 0.3
    moments_to_check: tuple[int, ...] = (1, 2, 3, 4, 6)

    def __post_init__(self):
        if self.replicas < 1:
            raise InvalidConfig("replicas must be >= 1")
        if self.bins < 1:
            raise InvalidConfig("bins must be >= 1")
        lo, hi = self.bin_range
        if not lo < hi:
            raise InvalidConfig("histogram range must satisfy lo < hi")
        if self.epsilon_weyl < 0:
            raise InvalidConfig("epsilon_weyl must be non-negative")
        if any(k < 0 for k in self.moments_to_check):
            raise InvalidConfig("moment orders must be non-negative")
        # raises DegenerateNormalization for parameters with r = 0
        compute_context(self.params.p, self.params.q)

    @classmethod
    def from_json_dict(cls, d: dict) -> "EnsembleConfig":
        try:
            params = GraphParams(n=int(d["n"]), p=float(d["p"]), q=float(d["q"]))
            rng = d.get("range", (-2.5, 2.5))
            return cls(
                params=params,
                replicas=int(d["replicas"]),
                master_seed=int(d["seed"]),
                bins=int(d.get("bins", 60)),
                bin_range=(float(rng[0]), float(rng[1])),
                epsilon_weyl=float(d.get("epsilon_weyl", 0.3)),
                moments_to_check=tuple(int(k) for k in d.get("moments", (1, 2, 3, 4, 6))),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidConfig(f"bad ensemble config: {exc}") from exc

    @classmethod
    def load(cls, path) -> "EnsembleConfig":
        with open(path, "r", encoding="utf-8") as fp:
            return cls.from_json_dict(json.load(fp))

    def to_json_dict(self) -> dict:
        return {
            "n": self.params.n,
            "p": _fmt(self.params.p),
            "q": _fmt(self.params.q),
            "replicas": self.replicas,
            "seed": self.master_seed,
            "bins": self.bins,
            "range": [_fmt(self.bin_range[0]), _fmt(self.bin_range[1])],
            "epsilon_weyl": _fmt(self.epsilon_weyl),
            "moments": list(self.moments_to_check),
        }


@dataclass(frozen=True)
class Histogram:
    """Fixed-edge histogram; out-of-range eigenvalues are counted, not dropped."""

    edges: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    out_of_range: int
    total: int

    @property
    def density(self) -> np.ndarray:
        widths = np.diff(self.edges)
        return self.counts / (self.total * widths)

    def to_csv(self, fp) -> None:
        fp.write("bin_left,bin_right,count,density\n")
        dens = self.density
        for i in range(self.counts.shape[0]):
            fp.write(
                f"{format(self.edges[i], '.17g')},{format(self.edges[i + 1], '.17g')},"
                f"{int(self.counts[i])},{format(dens[i], '.17g')}\n"
            )

    def to_json_dict(self) -> dict:
        return {
            "edges": [_fmt(x) for x in self.edges],
            "counts": [int(c) for c in self.counts],
            "density": [_fmt(x) for x in self.density],
            "out_of_range": self.out_of_range,
            "total": self.total,
        }


@dataclass(frozen=True)
class MomentStat:
    k: int
    value: float
    target: float


@dataclass(frozen=True)
class EnsembleReport:
    """Aggregated results of one ensemble run."""

    config: EnsembleConfig
    context: NormalizationContext
    histogram: Histogram
    ks_per_replica: tuple[float, ...]
    ks_pooled: float
    moments: tuple[MomentStat, ...]
    weyl_passes: int
    replica_seconds: tuple[float, ...]
    wall_seconds: float
    workers: int

    @property
    def weyl_pass_rate(self) -> float:
        return self.weyl_passes / self.config.replicas

    def to_json_dict(self) -> dict:
        return {
            "config": self.config.to_json_dict(),
            "normalization": {k: _fmt(v) for k, v in self.context.to_json_dict().items()},
            "histogram": self.histogram.to_json_dict(),
            "ks": {
                "per_replica": [_fmt(x) for x in self.ks_per_replica],
                "pooled": _fmt(self.ks_pooled),
            },
            "moments": [
                {"k": m.k, "value": _fmt(m.value), "target": _fmt(m.target)}
                for m in self.moments
            ],
            "weyl": {
                "epsilon": _fmt(self.config.epsilon_weyl),
                "passes": self.weyl_passes,
                "replicas": self.config.replicas,
                "pass_rate": _fmt(self.weyl_pass_rate),
            },
            "timings": {
                "wall_seconds": _fmt(self.wall_seconds),
                "replica_seconds": [_fmt(x) for x in self.replica_seconds],
                "workers": self.workers,
            },
        }

    def write_json(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fp:
            json.dump(self.to_json_dict(), fp, indent=2)
            fp.write("\n")


def replica_spectrum(params: GraphParams, seed: SeedSpec) -> Spectrum:
    """Spectrum of the scaled matrix for one replica: eig(S + c*Y) / (r*sqrt(n))."""
    ctx = compute_context(params.p, params.q)
    g = sample_graph(params, seed)
    s = skew_adjacency(g)
    m = shifted_skew_matrix(s, ctx)
    spec = eig_skew(m)
    return Spectrum(spec.lambdas / (ctx.r * math.sqrt(params.n)))


def weyl_report_for_seed(
    params: GraphParams, seed: SeedSpec, epsilon: float
) -> WeylReport:
    """Sample one graph and check the eigenvalue sandwich on -i*S_n."""
    ctx = compute_context(params.p, params.q)
    g = sample_graph(params, seed)
    s = skew_adjacency(g)
    spec = eig_skew(s.to_float())
    return weyl_bounds(spec, ctx, epsilon)


@dataclass(frozen=True)
class _ReplicaResult:
    counts: np.ndarray
    scaled: np.ndarray
    ks: float
    moment_sums: tuple[float, ...]
    weyl_pass: bool
    seconds: float


def _run_replica(
    cfg: EnsembleConfig, ctx: NormalizationContext, edges: np.ndarray, idx: int
) -> _ReplicaResult:
    t0 = time.perf_counter()
    params = cfg.params
    seed = SeedSpec(cfg.master_seed, idx)
    g = sample_graph(params, seed)
    s = skew_adjacency(g)
    m = shifted_skew_matrix(s, ctx)
    spec = eig_skew(m)
    scaled = spec.lambdas / (ctx.r * math.sqrt(params.n))
    counts, _ = np.histogram(scaled, bins=edges)
    ks = semicircle.ks_distance(ESD(scaled))
    moment_sums = tuple(float(np.sum(scaled**k)) for k in cfg.moments_to_check)
    if ctx.c == 0.0:
        spec_s = spec  # M = S exactly when the shift vanishes
    else:
        spec_s = eig_skew(s.to_float())
    weyl_pass = weyl_bounds(spec_s, ctx, cfg.epsilon_weyl).all_pass
    return _ReplicaResult(
        counts=counts,
        scaled=scaled,
        ks=ks,
        moment_sums=moment_sums,
        weyl_pass=weyl_pass,
        seconds=time.perf_counter() - t0,
    )


def run_ensemble(cfg: EnsembleConfig, workers: int | None = None) -> EnsembleReport:
    """Run all replicas and aggregate deterministically in replica-index order."""
    t0 = time.perf_counter()
    ctx = compute_context(cfg.params.p, cfg.params.q)
    lo, hi = cfg.bin_range
    edges = np.linspace(lo, hi, cfg.bins + 1)
    w = workers if workers is not None else worker_count()

    if w == 1:
        results = [_run_replica(cfg, ctx, edges, i) for i in range(cfg.replicas)]
    else:
        with ThreadPoolExecutor(max_workers=w) as pool:
            results = list(
                pool.map(lambda i: _run_replica(cfg, ctx, edges, i), range(cfg.replicas))
            )

    counts = np.zeros(cfg.bins, dtype=np.int64)
    moment_totals = [0.0] * len(cfg.moments_to_check)
    weyl_passes = 0
    for res in results:  # replica-index order
        counts += res.counts
        for j, v in enumerate(res.moment_sums):
            moment_totals[j] += v
        weyl_passes += res.weyl_pass
    total = cfg.replicas * cfg.params.n
    hist = Histogram(
        edges=edges,
        counts=counts,
        out_of_range=total - int(counts.sum()),
        total=total,
    )
    pooled = ESD(np.concatenate([res.scaled for res in results]))
    moments = tuple(
        MomentStat(k=k, value=moment_totals[j] / total, target=semicircle.moment(k))
        for j, k in enumerate(cfg.moments_to_check)
    )
    return EnsembleReport(
        config=cfg,
        context=ctx,
        histogram=hist,
        ks_per_replica=tuple(res.ks for res in results),
        ks_pooled=semicircle.ks_distance(pooled),
        moments=moments,
        weyl_passes=weyl_passes,
        replica_seconds=tuple(res.seconds for res in results),
        wall_seconds=time.perf_counter() - t0,
        workers=w,
    )
