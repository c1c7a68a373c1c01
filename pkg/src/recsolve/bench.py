"""Instrumented benchmark harness: scaling, crossover, parallel speedup.

Cost metrics
------------
For the recombination solver, ``flops`` is the total arithmetic tally (all
slots, all steps). Its parallel-step depth -- the critical-path cost with
one worker per slot -- is total flops divided by the per-step slot count
L = n + 1.

Elimination reports raw flops (about 2/3 n^3); its classical textbook
constant of 1/3 counts multiply-add pairs instead, which equals the
multiply tally alone. The crossover scan therefore compares the
recombination *depth* against the elimination *pair* count: the depth grows
like c * n^2 and undercuts the pair count's n^3/3 growth past a modest n.
The stylized-constant version of the same comparison (15 n^2 versus
n^3 / 3) crosses at n > 45.
"""
from __future__ import annotations

import csv
import time
from dataclasses import dataclass

import numpy as np

from . import kernels
from .elimination import SingularMatrixError, gauss_solve
from .generate import random_system
from .linop import oracle_from_dense, residual_inf
from .solver import SolverConfig, solve

CSV_FIELDS = ("n", "m", "variant", "workers", "flops", "wall_time_ns", "residual", "status")

#: Stylized cost-model constants: parallel recombination time ~ 15 n^2
#: versus elimination's n^3 / 3 multiply-add pairs, crossing for n > 45.
MODEL_REC_DEPTH_COEFF = 15.0
MODEL_ELIM_PAIR_COEFF = 1.0 / 3.0
MODEL_CROSSOVER_N = 45


@dataclass
class BenchRow:
    n: int
    m: int
    variant: str
    workers: int
    flops: int
    wall_time_ns: int
    residual: float
    status: str

    def as_record(self) -> dict:
        return {f: getattr(self, f) for f in CSV_FIELDS}


def run_recombination(n: int, m: int | None = None, seed: int = 0, workers: int = 1,
                      backend: str | None = None, **config_overrides):
    """(BenchRow, SolveReport) for one randomized solve on a random system."""
    matrix, rhs = random_system(n, m, seed=seed)
    oracle = oracle_from_dense(matrix, rhs)
    config = SolverConfig(seed=seed, workers=workers, backend=backend, **config_overrides)
    report = solve(oracle, config)
    variant = "recombination-" + (backend or kernels.DEFAULT_BACKEND)
    row = BenchRow(n=oracle.dim, m=oracle.row_count, variant=variant, workers=workers,
                   flops=report.flops.total, wall_time_ns=report.wall_time_ns,
                   residual=report.max_residual, status=report.status)
    return row, report


def run_elimination(n: int, seed: int = 0):
    """(BenchRow, EliminationResult) for the pivoted-elimination baseline."""
    matrix, rhs = random_system(n, seed=seed)
    t0 = time.perf_counter_ns()
    try:
        result = gauss_solve(matrix, rhs)
    except SingularMatrixError:
        wall = time.perf_counter_ns() - t0
        return BenchRow(n, n, "elimination", 1, 0, wall, float("nan"), "singular"), None
    wall = time.perf_counter_ns() - t0
    row = BenchRow(n=n, m=n, variant="elimination", workers=1, flops=result.flops.total,
                   wall_time_ns=wall, residual=residual_inf(matrix, rhs, result.x),
                   status="solved")
    return row, result


def fit_loglog_slope(sizes, values) -> float:
    """Least-squares slope of log(values) against log(sizes)."""
    if len(sizes) < 2:
        return float("nan")
    xs = np.log(np.asarray(sizes, dtype=float))
    ys = np.log(np.asarray(values, dtype=float))
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


def scaling_study(sizes, seed: int = 0, workers: int = 1,
                  backends: tuple[str | None, ...] = (None,)):
    """Square-system scaling for both solvers; returns (rows, summary).

    The summary holds fitted log-log slopes: total recombination flops and
    elimination flops against n (both ~3), and recombination depth against
    n (~2).
    """
    rows: list[BenchRow] = []
    rec_flops: dict[str, list[int]] = {}
    depth: list[float] = []
    elim_flops: list[int] = []
    for n in sizes:
        for backend in backends:
            row, report = run_recombination(n, seed=seed, workers=workers, backend=backend)
            rows.append(row)
            rec_flops.setdefault(row.variant, []).append(row.flops)
            if backend == backends[0]:
                depth.append(row.flops / report.iterates.count)
        row, _ = run_elimination(n, seed=seed)
        rows.append(row)
        elim_flops.append(row.flops)
    summary = {
        "sizes": list(sizes),
        "slopes": {variant: fit_loglog_slope(sizes, fl) for variant, fl in rec_flops.items()},
        "elimination_slope": fit_loglog_slope(sizes, elim_flops),
        "depth_slope": fit_loglog_slope(sizes, depth),
    }
    return rows, summary


@dataclass
class CrossoverResult:
    crossover_n: int | None
    sizes: list[int]
    rec_depth: list[float]
    elim_pairs: list[int]

    @property
    def model_crossover_n(self) -> int:
        return MODEL_CROSSOVER_N


def crossover_scan(seed: int = 0, n_min: int = 2, n_max: int = 100) -> CrossoverResult:
    """Smallest n where recombination depth beats elimination's pair count.

    Scans square sizes upward and measures both solvers at each size;
    ``crossover_n`` is None when no size in range crosses.
    """
    sizes: list[int] = []
    depths: list[float] = []
    pairs: list[int] = []
    crossover = None
    for n in range(n_min, n_max + 1):
        rec_row, report = run_recombination(n, seed=seed)
        elim_row, result = run_elimination(n, seed=seed)
        if result is None:
            continue
        d = rec_row.flops / report.iterates.count
        p = result.multiply_add_pairs
        sizes.append(n)
        depths.append(d)
        pairs.append(p)
        if crossover is None and d < p:
            crossover = n
    return CrossoverResult(crossover, sizes, depths, pairs)


def speedup_study(n: int, workers_list, seed: int = 0, backend: str | None = None):
    """Wall-time rows for one problem size across worker counts.

    Machine-dependent; recorded for inspection, never asserted.
    """
    rows = []
    for w in workers_list:
        row, _ = run_recombination(n, seed=seed, workers=w, backend=backend)
        rows.append(row)
    return rows


def write_csv(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        writer.writeheader()
        for row in rows:
            writer.writerow(row.as_record())
