"""Acceptance gate: one test and one printed PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v -s``. Every tolerance is
stated inline; nothing is calibrated at runtime.
"""
import math
import time

import numpy as np
import pytest

import recsolve
from recsolve import (
    DistributionSpec,
    RngState,
    SolverConfig,
    StepFailure,
    feas_tol,
    gauss_solve,
    oracle_from_dense,
    sample_iterates,
    solve,
    step,
)
from recsolve.bench import crossover_scan, fit_loglog_slope, run_recombination
from recsolve.recombine import recombine
from recsolve.sysio import SystemFormatError, parse_matrix_market, parse_system


def _verdict(num, name, ok, detail):
    print(f"\nACCEPTANCE {num:02d} {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    return ok


def test_criterion_01_rec_exactness():
    g = np.random.default_rng(1)
    t0 = time.perf_counter()
    worst = 0.0
    checked = 0
    while checked < 10_000:
        n = int(g.integers(2, 65))
        u, v, a = g.standard_normal((3, n))
        beta = float(g.standard_normal())
        out = recombine(u, v, lambda w: np.dot(a, w), beta)
        if out.degenerate:
            continue
        checked += 1
        bound = 1e-11 * (abs(beta) + np.linalg.norm(a) *
                         (np.linalg.norm(u) + np.linalg.norm(v)))
        worst = max(worst, abs(np.dot(a, out.z) - beta) / bound)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1.0 and elapsed < 5.0
    assert _verdict(1, "rec exactness", ok,
                    f"10^4 cases, worst residual at {worst:.3f} of bound, {elapsed:.2f}s")


def test_criterion_02_feasibility_ladder():
    failures = []
    aborted = []
    for n in (4, 8, 16, 32):
        for seed in (0, 1, 2):
            a, b = recsolve.random_system(n, seed=seed)
            oracle = oracle_from_dense(a, b)
            binf = float(np.max(np.abs(b)))
            cfg = SolverConfig(seed=seed).validated()
            root = RngState(seed)
            its = sample_iterates(DistributionSpec("gaussian", n), root.split(0), n + 1)
            for k in range(n):
                try:
                    its = step(its, oracle, k, cfg, root.split(1, k))
                except StepFailure:
                    # completion statistics are criterion 3's subject; the
                    # ladder claim applies to the steps that completed
                    aborted.append((n, seed, k))
                    break
                resid = float(np.max(np.abs(a[:k + 1] @ its.vectors.T - b[:k + 1, None])))
                if resid > feas_tol(k + 1, binf):
                    failures.append((n, seed, k, resid))
    ok = not failures
    assert _verdict(2, "feasibility ladder", ok,
                    f"sizes 4..32 x 3 seeds, violations: {failures or 'none'}, "
                    f"aborted steps: {aborted or 'none'}")


def test_criterion_03_probability_one_proxy():
    solved_default = 0
    solved_strict = 0
    runs = 500
    for seed in range(runs):
        a, b = recsolve.random_system(32, seed=seed)
        oracle = oracle_from_dense(a, b)
        if solve(oracle, SolverConfig(seed=seed)).solved:
            solved_default += 1
        if solve(oracle, SolverConfig.strict_paper(seed=seed)).solved:
            solved_strict += 1
    ok = solved_default >= 499 and solved_strict >= 495
    assert _verdict(3, "probability-one proxy", ok,
                    f"default {solved_default}/500 (need 499), "
                    f"strict {solved_strict}/500 (need 495)")


def test_criterion_04_oracle_agreement():
    g = np.random.default_rng(123)
    bad = []
    for i in range(100):
        n = int(g.integers(2, 65))
        seed = 5000 + i
        tries = 0
        while True:
            a, b = recsolve.random_system(n, seed=seed + 100_000 * tries)
            if np.linalg.cond(a) <= 1e4:
                break
            tries += 1
        rep = solve(oracle_from_dense(a, b), SolverConfig(seed=seed))
        x = gauss_solve(a, b).x
        err = float(max(np.max(np.abs(v - x)) for v in rep.iterates.vectors))
        if err > 1e-6 * np.max(np.abs(x)):
            bad.append((i, n, err))
    ok = not bad
    assert _verdict(4, "elimination-oracle agreement", ok,
                    f"{100 - len(bad)}/100 within 1e-6*||x||inf"
                    + (f", failures {bad}" if bad else ""))


def test_criterion_05_flop_scaling():
    sizes = [32, 64, 128, 256]
    totals = []
    over = []
    for n in sizes:
        row, _ = run_recombination(n, seed=0)
        totals.append(row.flops)
        if row.flops > 20 * n**3:
            over.append((n, row.flops))
    slope = fit_loglog_slope(sizes, totals)
    ok = abs(slope - 3.0) <= 0.1 and not over
    assert _verdict(5, "flop scaling", ok,
                    f"slope {slope:.3f} (need 3.0 +/- 0.1), over-budget: {over or 'none'}")


def test_criterion_06_crossover():
    res = crossover_scan(seed=0, n_min=2, n_max=100)
    ok = res.crossover_n is not None and 20 <= res.crossover_n <= 100
    assert _verdict(6, "flop crossover", ok,
                    f"measured crossover n={res.crossover_n} (need within [20,100]); "
                    f"stylized model 15n^2 vs n^3/3 crosses for n > {res.model_crossover_n}")


def test_criterion_07_parallel_determinism():
    a, b = recsolve.random_system(64, seed=7)
    oracle = oracle_from_dense(a, b)
    reports = [solve(oracle, SolverConfig(seed=7, workers=w)) for w in (1, 4, 8)]
    base = reports[0]
    same_bits = all(np.array_equal(base.iterates.vectors, r.iterates.vectors)
                    for r in reports[1:])
    same_flops = all(r.flops.total == base.flops.total for r in reports)
    ok = same_bits and same_flops
    assert _verdict(7, "parallel determinism", ok,
                    f"workers 1/4/8 bitwise-identical={same_bits}, "
                    f"flops equal={same_flops} ({base.flops.total})")


def test_criterion_08_partial_solution_contract():
    a, b = recsolve.random_system(8, seed=2)
    k_fail = 4
    a[k_fail] = 0.0
    b[k_fail] = 1.0
    rep = solve(oracle_from_dense(a, b), SolverConfig.strict_paper(seed=2))
    binf = float(np.max(np.abs(b)))
    prefix_ok = (rep.status == "partial" and rep.completed_steps == k_fail)
    resid = float(np.max(np.abs(a[:k_fail] @ rep.iterates.vectors.T - b[:k_fail, None])))
    feas_ok = resid <= feas_tol(k_fail, binf)
    ok = prefix_ok and feas_ok
    assert _verdict(8, "partial-solution contract", ok,
                    f"status={rep.status}, completed={rep.completed_steps} (rig at {k_fail}), "
                    f"prefix residual {resid:.2e} <= {feas_tol(k_fail, binf):.2e}")


def test_criterion_09_underdetermined():
    results = []
    oracle = oracle_from_dense([[1.0, 1.0]], [2.0])
    rep = solve(oracle, SolverConfig(seed=11))
    norms = np.linalg.norm(rep.iterates.vectors, axis=1)
    feas = float(np.max(np.abs(rep.iterates.vectors.sum(axis=1) - 2.0)))
    results.append(rep.solved and feas <= rep.feas_tolerance
                   and norms.max() - norms.min() > 1e-6)

    a, b = recsolve.random_system(8, m=3, seed=4)
    rep2 = solve(oracle_from_dense(a, b), SolverConfig(seed=4))
    norms2 = np.linalg.norm(rep2.iterates.vectors, axis=1)
    results.append(rep2.solved and rep2.max_residual <= rep2.feas_tolerance
                   and norms2.max() - norms2.min() > 1e-6)
    ok = all(results)
    assert _verdict(9, "underdetermined systems", ok,
                    f"1x2 and 3x8 solved with distinct outputs: {results}")


def test_criterion_10_complex_instantiation():
    a, b = recsolve.random_system(8, seed=21, complex_field=True)
    rep = solve(oracle_from_dense(a, b), SolverConfig(seed=21))
    bar = 1e-8 * float(np.max(np.abs(b)))
    ok = rep.solved and rep.max_residual <= bar
    assert _verdict(10, "complex instantiation", ok,
                    f"status={rep.status}, residual {rep.max_residual:.2e} <= {bar:.2e}")


def test_criterion_11_io_conformance(tmp_path):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    checks = []
    # array + rhs
    m, r = parse_system(
        write("a.mtx", "%%MatrixMarket matrix array real general\n2 2\n1\n0\n0\n1\n"),
        write("a.rhs", "3\n4\n"))
    checks.append(np.array_equal(m, np.eye(2)) and np.array_equal(r, [3, 4]))
    # coordinate
    m = parse_matrix_market(
        write("c.mtx", "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 2.0\n2 2 4.0\n"))
    checks.append(np.array_equal(m, [[2, 0], [0, 4]]))
    # complex routes to the complex field
    m = parse_matrix_market(
        write("x.mtx", "%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1.0 2.0\n"))
    checks.append(m.dtype.kind == "c" and m[0, 0] == 1 + 2j)
    # comment-laden file parses
    m = parse_matrix_market(
        write("k.mtx", "%%MatrixMarket matrix coordinate real general\n% c\n\n1 1 1\n% c\n1 1 5.0\n"))
    checks.append(m[0, 0] == 5.0)
    # malformed inputs fail with the documented diagnostics
    for name, text, frag in [
        ("h.mtx", "%%MatrixMarket tensor array real general\n1 1\n1\n", "object"),
        ("f.mtx", "%%MatrixMarket matrix array integer general\n1 1\n1\n", "field"),
        ("o.mtx", "%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n", "outside"),
        ("d.mtx", "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n1 1 2.0\n", "duplicate"),
        ("n.mtx", "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 xyz\n", "non-numeric"),
    ]:
        try:
            parse_matrix_market(write(name, text))
            checks.append(False)
        except SystemFormatError as err:
            checks.append(frag in str(err))
    ok = all(checks)
    assert _verdict(11, "i/o conformance", ok, f"{sum(checks)}/{len(checks)} fixture checks")
