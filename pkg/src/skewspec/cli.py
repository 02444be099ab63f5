"""Command-line front end.

Subcommands: sample, spectrum, ensemble, verify, check-bounds.  All numeric
output is locale-independent; files written with --seed are byte-identical
across runs.  Exit status: 0 success, 1 verification failure, 2 usage or
parameter errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import walk_oracle
from .ensemble import EnsembleConfig, run_ensemble, weyl_report_for_seed
from .errors import DegenerateNormalization, InvalidConfig, SkewSpecError
from .graph_model import GraphParams, SeedSpec, read_arcs, sample_graph, skew_adjacency, write_arcs
from .normalization import compute_context, shifted_skew_matrix
from .semicircle import catalan
from .spectral import Spectrum, eig_skew, spectrum_to_csv


def _open_out(path: str | None):
    if path is None:
        return sys.stdout, False
    return open(path, "w", encoding="utf-8"), True


def _emit(path: str | None, write) -> None:
    fp, close = _open_out(path)
    try:
        write(fp)
    finally:
        if close:
            fp.close()


def _add_model_flags(p: argparse.ArgumentParser, seed_required: bool = True) -> None:
    p.add_argument("--n", type=int, help="number of vertices")
    p.add_argument("--p", type=float, required=True, help="edge probability in [0, 1]")
    p.add_argument("--q", type=float, required=True,
                   help="probability of orienting an edge low-to-high")
    p.add_argument("--seed", type=int, required=seed_required, help="master seed (64-bit)")
    p.add_argument("--replica", type=int, default=0, help="replica index (default 0)")


def cmd_sample(args) -> int:
    params = GraphParams(n=args.n, p=args.p, q=args.q)
    g = sample_graph(params, SeedSpec(args.seed, args.replica))
    _emit(args.out, lambda fp: write_arcs(g, fp))
    return 0


def cmd_spectrum(args) -> int:
    ctx = compute_context(args.p, args.q)
    if args.infile is not None:
        with open(args.infile, "r", encoding="utf-8") as fp:
            g = read_arcs(fp)
    else:
        if args.n is None or args.seed is None:
            raise InvalidConfig("spectrum needs either --in or both --n and --seed")
        g = sample_graph(GraphParams(n=args.n, p=args.p, q=args.q),
                         SeedSpec(args.seed, args.replica))
    s = skew_adjacency(g)
    spec = eig_skew(shifted_skew_matrix(s, ctx))
    if args.scaled:
        spec = Spectrum(spec.lambdas / (ctx.r * math.sqrt(g.n)))
    _emit(args.out, lambda fp: spectrum_to_csv(spec, fp))
    return 0


def cmd_ensemble(args) -> int:
    cfg = EnsembleConfig.load(args.config)
    report = run_ensemble(cfg)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    hist_path = out_dir / "histogram.csv"
    report_path = out_dir / "report.json"
    with open(hist_path, "w", encoding="utf-8") as fp:
        report.histogram.to_csv(fp)
    report.write_json(report_path)
    print(f"replicas:        {cfg.replicas} (n={cfg.params.n}, p={cfg.params.p}, q={cfg.params.q})")
    print(f"pooled KS:       {report.ks_pooled:.6f}")
    for m in report.moments:
        print(f"moment k={m.k}:      {m.value:+.6f} (target {m.target:+.1f})")
    print(f"weyl pass rate:  {report.weyl_pass_rate:.3f} (epsilon={cfg.epsilon_weyl})")
    print(f"out of range:    {report.histogram.out_of_range} of {report.histogram.total}")
    print(f"wall time:       {report.wall_seconds:.1f}s on {report.workers} workers")
    print(f"wrote {hist_path} and {report_path}")
    return 0


def _verify_walks(args) -> list[dict]:
    t_max = args.t_max if args.t_max is not None else 4
    checks = []
    for t in range(1, t_max + 1):
        expected = catalan(t) * math.factorial(t + 1)
        actual = walk_oracle.count_tree_walks(t)
        checks.append(
            {
                "check": f"tree_walk_count_t{t}",
                "expected": expected,
                "actual": actual,
                "pass": actual == expected,
            }
        )
    return checks


def _verify_moments(args) -> list[dict]:
    p = args.p if args.p is not None else 0.1
    q = args.q if args.q is not None else 0.5
    k_max = args.k if args.k is not None else 8
    ctx = compute_context(p, q)
    checks = []
    for k in range(1, k_max + 1):
        actual = walk_oracle.exact_entry_moment(ctx, k)
        if q == 0.5:
            if k % 2 == 1:
                expected = 0.0
            else:
                sign = 1.0 if k % 4 == 0 else -1.0
                expected = sign * p ** (1 - k // 2)
            ok = abs(actual - expected) <= 1e-12 * max(1.0, abs(expected))
            checks.append(
                {
                    "check": f"entry_moment_k{k}",
                    "expected": expected,
                    "actual": [actual.real, actual.imag],
                    "pass": bool(ok),
                }
            )
        else:
            bound = (1.0 / ctx.r) ** (k - 2) * (1.0 + abs(ctx.c)) ** k
            checks.append(
                {
                    "check": f"entry_moment_bound_k{k}",
                    "expected": bound,
                    "actual": abs(actual),
                    "pass": bool(abs(actual) <= bound * (1.0 + 1e-12)),
                }
            )
    return checks


def _verify_trace(args) -> list[dict]:
    n_max = args.n if args.n is not None else 4
    k_max = args.k if args.k is not None else 6
    if args.p is not None and args.q is not None:
        grid = [(args.p, args.q)]
    else:
        grid = [(p, q) for p in (0.3, 0.7) for q in (0.2, 0.5, 0.8)]
    checks = []
    for n in range(2, n_max + 1):
        for k in range(1, k_max + 1):
            for p, q in grid:
                params = GraphParams(n=n, p=p, q=q)
                expected = walk_oracle.trace_moment_exact_tiny(params, k)
                actual = walk_oracle.trace_moment_walk_sum(params, k)
                checks.append(
                    {
                        "check": f"trace_moment_n{n}_k{k}_p{p}_q{q}",
                        "expected": expected,
                        "actual": actual,
                        "pass": bool(abs(actual - expected) <= 1e-12),
                    }
                )
    return checks


def cmd_verify(args) -> int:
    suites = {"walks": _verify_walks, "moments": _verify_moments, "trace": _verify_trace}
    checks = suites[args.suite](args)
    _emit(args.out, lambda fp: (json.dump(checks, fp, indent=2), fp.write("\n")))
    return 0 if all(c["pass"] for c in checks) else 1


def cmd_check_bounds(args) -> int:
    params = GraphParams(n=args.n, p=args.p, q=args.q)
    report = weyl_report_for_seed(params, SeedSpec(args.seed, args.replica), args.epsilon)
    payload = {
        "n": args.n,
        "p": args.p,
        "q": args.q,
        "seed": args.seed,
        "replica": args.replica,
        "epsilon": args.epsilon,
        "branch": report.branch,
        "num_pass": report.num_pass,
        "num_fail": report.num_fail,
        "violations": report.violations(),
    }
    _emit(args.out, lambda fp: (json.dump(payload, fp, indent=2), fp.write("\n")))
    return 0 if report.all_pass else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skewspec",
        description="Spectra of randomly oriented Erdos-Renyi graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sample = sub.add_parser("sample", help="sample a graph and emit its arc list")
    _add_model_flags(p_sample)
    p_sample.add_argument("--out", help="output path (default: stdout)")
    p_sample.set_defaults(func=cmd_sample)

    p_spec = sub.add_parser(
        "spectrum",
        help="eigenvalues of the (shifted) skew-adjacency matrix as CSV",
    )
    p_spec.add_argument("--in", dest="infile", help="read arcs from this file instead of sampling")
    _add_model_flags(p_spec, seed_required=False)
    p_spec.add_argument("--scaled", action="store_true",
                        help="divide eigenvalues by r*sqrt(n)")
    p_spec.add_argument("--out", help="output path (default: stdout)")
    p_spec.set_defaults(func=cmd_spectrum)

    p_ens = sub.add_parser(
        "ensemble",
        help="run a Monte Carlo ensemble from a JSON config",
        description="Run a Monte Carlo ensemble from a JSON config. "
        "SKEWSPEC_THREADS caps the worker pool (default: hardware "
        "parallelism); results never depend on it.",
    )
    p_ens.add_argument("--config", required=True, help="JSON config path")
    p_ens.add_argument("--out-dir", default=".", help="directory for histogram.csv and report.json")
    p_ens.set_defaults(func=cmd_ensemble)

    p_ver = sub.add_parser("verify", help="run an exact oracle suite; exit 1 on any failure")
    p_ver.add_argument("--suite", required=True, choices=("moments", "walks", "trace"))
    p_ver.add_argument("--t-max", dest="t_max", type=int, help="walks: largest tree size")
    p_ver.add_argument("--n", type=int, help="trace: largest matrix size")
    p_ver.add_argument("--k", type=int, help="largest moment order")
    p_ver.add_argument("--p", type=float, help="edge probability override")
    p_ver.add_argument("--q", type=float, help="orientation probability override")
    p_ver.add_argument("--out", help="output path (default: stdout)")
    p_ver.set_defaults(func=cmd_verify)

    p_chk = sub.add_parser("check-bounds", help="eigenvalue sandwich check for one sampled graph")
    _add_model_flags(p_chk)
    p_chk.add_argument("--epsilon", type=float, required=True,
                       help="slack replacing the asymptotic o(1) term")
    p_chk.add_argument("--out", help="output path (default: stdout)")
    p_chk.set_defaults(func=cmd_check_bounds)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DegenerateNormalization, InvalidConfig, ValueError, OSError) as exc:
        print(f"skewspec: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except SkewSpecError as exc:
        print(f"skewspec: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
