"""Command-line entry points: solve, bench, check.

Exit codes: 0 = solved / check passed, 2 = partial solve / check violated,
1 = usage or I/O error.
"""
from __future__ import annotations

import argparse
import sys

import numpy as np

from . import kernels
from .bench import (
    crossover_scan,
    run_elimination,
    run_recombination,
    scaling_study,
    speedup_study,
    write_csv,
)
from .elimination import SingularMatrixError
from .generate import random_system
from .linop import DimensionMismatch, oracle_from_dense
from .sampling import DistributionSpec
from .solver import ConfigurationError, SolverConfig, solve
from .sysio import SystemFormatError, parse_system, read_report, write_report


class CliUsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliUsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="recsolve",
                     description="Randomized recombination solver for A x = b (m <= n, full row rank)")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one system")
    src = p_solve.add_argument_group("system source")
    src.add_argument("-A", "--matrix", help="matrix file (Matrix Market or dense text)")
    src.add_argument("-b", "--rhs", help="right-hand side file (text column)")
    src.add_argument("--random", nargs="+", type=int, metavar="N",
                     help="generate a random N [M] Gaussian system instead of reading files")
    src.add_argument("--cond", type=float, help="condition-number target for --random")
    src.add_argument("--complex", action="store_true", dest="complex_field",
                     help="generate the --random system over the complex field")
    cfg = p_solve.add_argument_group("solver configuration")
    cfg.add_argument("--seed", type=int, default=0, help="64-bit seed (default 0)")
    cfg.add_argument("--dist", choices=["gaussian", "uniform", "sphere"], default="gaussian",
                     help="law of the start vectors (default gaussian)")
    cfg.add_argument("--mean", type=float, default=0.0, help="gaussian mean (default 0)")
    cfg.add_argument("--std", type=float, default=1.0, help="gaussian stddev (default 1)")
    cfg.add_argument("--lo", type=float, default=-1.0, help="uniform lower bound (default -1)")
    cfg.add_argument("--hi", type=float, default=1.0, help="uniform upper bound (default 1)")
    cfg.add_argument("-L", "--iterates", type=int, help="number of candidate vectors (default n+1)")
    cfg.add_argument("--rec-tol", type=float, default=None,
                     help="relative degeneracy tolerance (default 1e-12)")
    cfg.add_argument("--retries", type=int, default=None,
                     help="redraws per degenerate pair before failing (default 3)")
    cfg.add_argument("--guard", action="store_true",
                     help="enable the pair-degeneracy respread guard")
    cfg.add_argument("--guard-threshold", type=float, default=1e-8,
                     help="relative pair-distance threshold for the guard (default 1e-8)")
    cfg.add_argument("--respread-c", type=float, default=2.0,
                     help="respread factor c > 1 (default 2)")
    cfg.add_argument("--reduced", action="store_true",
                     help="update only max(2, n+1-k) vectors at step k, dropping the rest")
    cfg.add_argument("--pairs", choices=["adaptive", "uniform"], default="adaptive",
                     help="pair schedule: offset-adaptive (default) or blind uniform")
    cfg.add_argument("--parallel", type=int, default=1, metavar="W",
                     help="worker threads inside each step (default 1)")
    cfg.add_argument("--strict-paper", action="store_true",
                     help="stop on first degeneracy: no retries, no guard, L = n+1")
    cfg.add_argument("--backend", choices=["compiled", "python"], default=None,
                     help="kernel backend (default: compiled when available)")
    out = p_solve.add_argument_group("output")
    out.add_argument("--out", help="write the JSON report here")
    out.add_argument("--include-iterates", action="store_true",
                     help="include every output vector in the report")

    p_bench = sub.add_parser("bench", help="scaling and crossover benchmark")
    p_bench.add_argument("--sizes", default="32,64,128,256",
                         help="comma-separated square sizes (default 32,64,128,256)")
    p_bench.add_argument("--repeats", type=int, default=1, help="runs per size (default 1)")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--parallel", type=int, default=1, metavar="W")
    p_bench.add_argument("--backends", default="default",
                         help="'default', 'both', or comma list of compiled,python")
    p_bench.add_argument("--crossover", action="store_true",
                         help="also scan small sizes for the flop crossover point")
    p_bench.add_argument("--speedup", type=int, metavar="N",
                         help="also time size N across 1,2,4,8 workers")
    p_bench.add_argument("--out", help="write CSV rows here")

    p_check = sub.add_parser("check", help="re-verify a report against its system")
    p_check.add_argument("--report", required=True, help="JSON report to verify")
    p_check.add_argument("-A", "--matrix", required=True, help="original matrix file")
    p_check.add_argument("-b", "--rhs", help="original right-hand side file")
    return parser


def _load_system(args):
    if args.random is not None:
        if args.matrix or args.rhs:
            raise CliUsageError("--random conflicts with -A/-b")
        if not 1 <= len(args.random) <= 2:
            raise CliUsageError("--random takes N [M]")
        n = args.random[0]
        m = args.random[1] if len(args.random) == 2 else None
        return random_system(n, m, seed=args.seed, cond=args.cond,
                             complex_field=args.complex_field)
    if not args.matrix:
        raise CliUsageError("pass -A/--matrix (with -b) or --random N")
    return parse_system(args.matrix, args.rhs)


def _solver_config(args, dim: int) -> SolverConfig:
    spec = DistributionSpec(args.dist, dim, mean=args.mean, stddev=args.std,
                            lo=args.lo, hi=args.hi)
    if args.strict_paper:
        if args.guard or args.retries is not None:
            raise CliUsageError("--strict-paper conflicts with --guard/--retries")
        config = SolverConfig.strict_paper(seed=args.seed, distribution=spec,
                                           workers=args.parallel, backend=args.backend,
                                           pair_strategy=args.pairs)
    else:
        config = SolverConfig(
            distribution=spec,
            seed=args.seed,
            L=args.iterates,
            guard=args.guard,
            degeneracy_dist_threshold=args.guard_threshold,
            respread_c=args.respread_c,
            reduced_updates=args.reduced,
            workers=args.parallel,
            backend=args.backend,
            pair_strategy=args.pairs,
        )
        if args.retries is not None:
            config.max_retries_per_step = args.retries
    if args.rec_tol is not None:
        config.rec_tol = args.rec_tol
    return config


def run_solve(args) -> int:
    matrix, rhs = _load_system(args)
    oracle = oracle_from_dense(matrix, rhs)
    config = _solver_config(args, oracle.dim)
    report = solve(oracle, config)
    print(f"status: {report.status}")
    print(f"rows satisfied: {report.completed_steps}/{report.rows}")
    print(f"max residual: {report.max_residual:.6e} (tolerance {report.feas_tolerance:.6e})")
    fl = report.flops
    print(f"flops: {fl.total} (adds={fl.adds}, muls={fl.muls}, divs={fl.divs})")
    print(f"retries: {report.retries_used}")
    print(f"backend: {report.backend}, workers: {config.workers}")
    print(f"wall time: {report.wall_time_ns / 1e6:.3f} ms")
    if args.out:
        write_report(report, args.out, include_iterates=args.include_iterates)
        print(f"report: {args.out}")
    return 0 if report.solved else 2


def _parse_backends(text: str):
    if text == "default":
        return (None,)
    names = ("compiled", "python") if text == "both" else tuple(text.split(","))
    for name in names:
        if name not in kernels.available_backends():
            raise CliUsageError(f"backend {name!r} not available (have {kernels.available_backends()})")
    return names


def run_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s]
    except ValueError:
        raise CliUsageError(f"bad --sizes list {args.sizes!r}") from None
    if not sizes or min(sizes) < 1 or args.repeats < 1:
        raise CliUsageError("sizes must be positive and repeats >= 1")
    backends = _parse_backends(args.backends)

    all_rows = []
    for r in range(args.repeats):
        rows, summary = scaling_study(sizes, seed=args.seed + r, workers=args.parallel,
                                      backends=backends)
        all_rows.extend(rows)
        if r == 0:
            for variant, slope in summary["slopes"].items():
                print(f"{variant}: log-log flop slope {slope:.3f}")
            print(f"elimination: log-log flop slope {summary['elimination_slope']:.3f}")
            print(f"recombination parallel-step depth slope {summary['depth_slope']:.3f}")

    if args.crossover:
        res = crossover_scan(seed=args.seed)
        if res.crossover_n is None:
            print("crossover: not reached in scan range")
        else:
            print(f"crossover: recombination depth beats elimination multiply-add pairs "
                  f"from n = {res.crossover_n}")
        print(f"stylized cost model (15 n^2 vs n^3/3) crosses for n > {res.model_crossover_n}")

    if args.speedup:
        rows = speedup_study(args.speedup, (1, 2, 4, 8), seed=args.seed)
        all_rows.extend(rows)
        base = rows[0].wall_time_ns
        for row in rows:
            ratio = base / row.wall_time_ns if row.wall_time_ns else float("nan")
            print(f"n={row.n} workers={row.workers}: {row.wall_time_ns / 1e6:.3f} ms "
                  f"(speedup x{ratio:.2f})")

    if args.out:
        write_csv(args.out, all_rows)
        print(f"csv: {args.out}")
    return 0


def run_check(args) -> int:
    data = read_report(args.report)
    matrix, rhs = parse_system(args.matrix, args.rhs)
    if matrix.shape != (data["rows"], data["cols"]):
        raise DimensionMismatch(
            f"system is {matrix.shape[0]}x{matrix.shape[1]} but report says "
            f"{data['rows']}x{data['cols']}")
    vectors = data.get("iterates") or [data["solution"]]
    k = int(data["completed_steps"])
    tol = float(data["feas_tol"])
    worst = 0.0
    for idx, vec in enumerate(vectors):
        if vec.shape[0] != matrix.shape[1]:
            raise DimensionMismatch(f"vector {idx} has wrong length {vec.shape[0]}")
        resid = np.abs(matrix[:k] @ vec - rhs[:k])
        if k and float(np.max(resid)) > tol:
            bad = int(np.argmax(resid > tol))
            print(f"FAIL: vector {idx} violates row {bad}: "
                  f"|residual| = {float(resid[bad]):.6e} > {tol:.6e}")
            return 2
        if k:
            worst = max(worst, float(np.max(resid)))
    print(f"OK: {len(vectors)} vector(s) satisfy rows 0..{k - 1 if k else '(none)'} "
          f"within {tol:.6e} (worst {worst:.6e})")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "solve":
            return run_solve(args)
        if args.command == "bench":
            return run_bench(args)
        return run_check(args)
    except CliUsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (SystemFormatError, DimensionMismatch, ConfigurationError,
            SingularMatrixError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
