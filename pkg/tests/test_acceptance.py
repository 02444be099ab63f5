"""Acceptance suite: every criterion runs at its stated tolerance and prints
one pass/fail line (run with ``pytest -s tests/test_acceptance.py`` to see
them as they complete).  The Monte Carlo criteria use fixed master seeds;
observed values are printed so they double as regression baselines.
"""

import io
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from conftest import make_skew
from skewspec.ensemble import (
    EnsembleConfig,
    replica_spectrum,
    run_ensemble,
    weyl_report_for_seed,
    worker_count,
)
from skewspec.graph_model import GraphParams, SeedSpec
from skewspec.normalization import ShiftMatrix, compute_context
from skewspec.semicircle import catalan, pdf
from skewspec.spectral import eig_skew, y_spectrum_closed_form
from skewspec.walk_oracle import (
    count_tree_walks,
    exact_entry_moment,
    trace_moment_exact_tiny,
    trace_moment_walk_sum,
)


def _report(num: int, name: str, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[criterion {num:02d}] {name}: {status} ({detail})", flush=True)
    assert ok, f"criterion {num} ({name}): {detail}"


def test_criterion_01_figure_reproduction():
    cfg = EnsembleConfig(
        params=GraphParams(1000, 0.1, 0.5),
        replicas=500,
        master_seed=20240501,
        bins=60,
        bin_range=(-2.5, 2.5),
        moments_to_check=(2,),
    )
    rep = run_ensemble(cfg)
    centers = 0.5 * (rep.histogram.edges[:-1] + rep.histogram.edges[1:])
    dev = float(np.max(np.abs(rep.histogram.density - pdf(centers))))
    ok = rep.ks_pooled <= 0.03 and dev <= 0.03
    _report(
        1,
        "figure-1 ensemble",
        ok,
        f"pooled KS {rep.ks_pooled:.5f} <= 0.03, max density deviation {dev:.5f} <= 0.03, "
        f"wall {rep.wall_seconds:.0f}s",
    )


def test_criterion_02_moment_convergence():
    cfg = EnsembleConfig(
        params=GraphParams(1000, 0.1, 0.5),
        replicas=20,
        master_seed=71,
        bins=60,
        bin_range=(-2.5, 2.5),
        moments_to_check=(1, 2, 3, 4, 6),
    )
    rep = run_ensemble(cfg)
    got = {m.k: m.value for m in rep.moments}
    bands = {1: 0.05, 2: 0.05, 3: 0.1, 4: 0.2, 6: 0.6}
    targets = {1: 0.0, 2: 1.0, 3: 0.0, 4: 2.0, 6: 5.0}
    devs = {k: abs(got[k] - targets[k]) for k in bands}
    ok = all(devs[k] <= bands[k] for k in bands)
    detail = ", ".join(f"|m{k}-{targets[k]:g}|={devs[k]:.4f}<={bands[k]}" for k in sorted(bands))
    _report(2, "trace moments at n=1000", ok, detail)


def test_criterion_03_ones_matrix_closed_form():
    worst = 0.0
    for n in range(1, 65):
        got = eig_skew(ShiftMatrix(n).materialize()).lambdas
        want = y_spectrum_closed_form(n).lambdas
        worst = max(worst, float(np.max(np.abs(got - want))))
    _report(3, "cotangent spectrum n=1..64", worst <= 1e-8, f"max error {worst:.3e} <= 1e-8")


def test_criterion_04_tree_walk_counts():
    expected = [2, 12, 120, 1680]
    got = [count_tree_walks(t) for t in range(1, 5)]
    formula = [catalan(t) * math.factorial(t + 1) for t in range(1, 5)]
    ok = got == expected == formula
    _report(4, "tree-walk enumeration t=1..4", ok, f"counts {got}")


def test_criterion_05_tiny_trace_oracle():
    worst = 0.0
    for n in (2, 3, 4):
        for k in range(1, 7):
            for p in (0.3, 0.7):
                for q in (0.2, 0.5, 0.8):
                    params = GraphParams(n, p, q)
                    a = trace_moment_exact_tiny(params, k)
                    b = trace_moment_walk_sum(params, k)
                    worst = max(worst, abs(a - b))
    v2 = trace_moment_exact_tiny(GraphParams(2, 0.3, 0.5), 2)
    v4 = trace_moment_exact_tiny(GraphParams(4, 0.3, 0.5), 2)
    ok = worst <= 1e-12 and abs(v2 - 0.5) <= 1e-12 and abs(v4 - 0.75) <= 1e-12
    _report(
        5,
        "trace oracle dual routes",
        ok,
        f"max route disagreement {worst:.2e} <= 1e-12, m2(n=2)={v2:.15g}, m2(n=4)={v4:.15g}",
    )


def test_criterion_06_entry_moment_pattern():
    ctx = compute_context(0.1, 0.5)
    targets = {2: -1.0, 4: 10.0, 6: -100.0}
    devs = {k: abs(exact_entry_moment(ctx, k) - v) for k, v in targets.items()}
    odd_max = max(abs(exact_entry_moment(ctx, k)) for k in (1, 3, 5, 7, 9))
    ok = all(d <= 1e-12 for d in devs.values()) and odd_max <= 1e-12
    detail = ", ".join(f"|E(x^{k})-({v:g})|={devs[k]:.2e}" for k, v in targets.items())
    _report(6, "entry-moment pattern", ok, detail + f", max odd {odd_max:.2e}")


def test_criterion_07_spectral_radius_trend():
    sizes = (250, 500, 1000, 2000)
    seeds = 20
    means = []
    with ThreadPoolExecutor(worker_count()) as pool:
        for n in sizes:
            params = GraphParams(n, 0.1, 0.5)
            radii = list(
                pool.map(
                    lambda s: replica_spectrum(params, SeedSpec(5150, s)).max_abs(),
                    range(seeds),
                )
            )
            means.append(float(np.mean(radii)))
    devs = [abs(m - 2.0) for m in means]
    decreasing = sum(devs[i + 1] < devs[i] for i in range(len(devs) - 1))
    ok = decreasing >= 3 and 1.8 <= means[-1] <= 2.2
    _report(
        7,
        "scaled spectral radius -> 2",
        ok,
        f"means {[f'{m:.4f}' for m in means]}, |dev| decreasing in {decreasing}/3 steps, "
        f"final {means[-1]:.4f} in [1.8, 2.2]",
    )


def test_criterion_08_weyl_sandwich():
    seeds = 100
    rates = {}
    with ThreadPoolExecutor(worker_count()) as pool:
        for q in (0.5, 0.7, 0.3):
            params = GraphParams(2000, 0.1, q)
            passes = sum(
                pool.map(
                    lambda s: weyl_report_for_seed(params, SeedSpec(8800, s), 0.3).all_pass,
                    range(seeds),
                )
            )
            rates[q] = passes
    ok = all(v >= 99 for v in rates.values())
    detail = ", ".join(f"q={q}: {v}/100" for q, v in rates.items())
    _report(8, "eigenvalue sandwich at n=2000", ok, detail)


def test_criterion_09_solver_property_suite():
    worst_sym = worst_cross = worst_trace = 0.0
    for n in (8, 64, 256):
        for i in range(50):
            m = make_skew(n, seed=n * 1000 + i)
            spec = eig_skew(m)
            worst_sym = max(
                worst_sym,
                spec.symmetry_defect() / (1e-8 * n * max(1.0, spec.max_abs())),
            )
            ours = np.sort(spec.lambdas**2)
            ref = np.sort(np.linalg.eigvalsh(-m @ m))
            scale = max(1.0, float(np.max(np.abs(ref))))
            worst_cross = max(worst_cross, float(np.max(np.abs(ours - ref))) / (1e-8 * scale))
            rhs = float(np.sum(2.0 * np.triu(m, 1) ** 2))
            worst_trace = max(worst_trace, abs(float(np.sum(spec.lambdas**2)) - rhs) / (1e-10 * rhs))
    ok = worst_sym <= 1.0 and worst_cross <= 1.0 and worst_trace <= 1.0
    _report(
        9,
        "solver properties (150 matrices)",
        ok,
        f"worst symmetry {worst_sym:.2e}, cross-solver {worst_cross:.2e}, "
        f"trace identity {worst_trace:.2e} (fractions of tolerance)",
    )


def test_criterion_10_worker_determinism():
    cfg = EnsembleConfig(
        params=GraphParams(120, 0.2, 0.5),
        replicas=48,
        master_seed=909,
        bins=30,
        bin_range=(-2.5, 2.5),
        moments_to_check=(2, 4),
    )
    outputs = []
    for w in (1, 4, 16):
        rep = run_ensemble(cfg, workers=w)
        buf = io.StringIO()
        rep.histogram.to_csv(buf)
        outputs.append(buf.getvalue().encode())
    ok = outputs[0] == outputs[1] == outputs[2]
    _report(10, "worker-count determinism", ok, f"csv bytes {len(outputs[0])}, workers 1/4/16 identical")
