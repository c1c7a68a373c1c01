"""Randomized recombination solver for full-row-rank systems A x = b.

The solver keeps L >= n+1 candidate vectors. Sweeping the rows k = 0..m-1
once, it draws random pairs of candidates and recombines each pair onto the
hyperplane of row k. Because a recombined point is an affine combination of
its pair, it stays inside every affine subspace containing both inputs, so
equations already satisfied stay satisfied: after step k every candidate
solves the first k+1 equations, and after the final step every candidate
solves the whole system (with probability one over the random draws).

Within a step, all recombinations read the previous generation and write
into pre-assigned slots of a fresh buffer, so they can run on any number of
threads with bitwise-identical results; steps are strictly sequential.

A degenerate pair (row action equal on both endpoints) would require
division by zero. The strictest reaction is to stop and report the partial
solution; by default the solver first redraws the offending pair a few
times, which is the finite-precision reading of an event that has
probability zero in exact arithmetic. Set ``max_retries_per_step=0`` (the
--strict-paper CLI mode) for the stop-immediately behavior.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from . import kernels
from .flopcount import FlopCounter, rec_degenerate_flops, rec_flops
from .linop import RowOracle
from .recombine import DEFAULT_REC_TOL, recombine
from .sampling import DistributionSpec, RngState, sample_iterates
from .scalars import COMPLEX, is_complex_dtype

#: feas_tol(k) = FEAS_TOL_COEFF * k * max(1, ||b||_inf): per-step error budget.
FEAS_TOL_COEFF = 1e-9

#: Pair spread beyond which the guard contracts instead of respreading.
GUARD_FAR_RATIO = 1e6

# Stream namespaces under the run seed (see sampling.RngState.split).
_STREAM_INIT = 0
_STREAM_STEP = 1


class ConfigurationError(ValueError):
    """Invalid or inconsistent solver configuration."""


class StepFailure(RuntimeError):
    """A recombination stayed degenerate through all permitted redraws."""

    def __init__(self, row: int, slot: int, attempts: int):
        self.row = row
        self.slot = slot
        self.attempts = attempts
        super().__init__(
            f"degenerate recombination at row {row}, slot {slot}, after {attempts} redraw(s)"
        )


def feas_tol(k: int, rhs_inf_norm: float) -> float:
    """Feasibility budget for the first k equations."""
    return FEAS_TOL_COEFF * k * max(1.0, rhs_inf_norm)


@dataclass
class IterateSet:
    """The current solution candidates: one vector per row of ``vectors``.

    ``generation`` counts completed outer steps; after generation k every
    vector satisfies the first k equations (within feas_tol).
    """

    vectors: np.ndarray
    generation: int = 0

    def __post_init__(self):
        self.vectors = np.ascontiguousarray(self.vectors)
        if self.vectors.ndim != 2 or self.vectors.shape[0] < 2:
            raise ConfigurationError(
                f"iterate set must be 2-D with at least 2 vectors, got shape {self.vectors.shape}"
            )

    @property
    def count(self) -> int:
        return self.vectors.shape[0]

    @property
    def dim(self) -> int:
        return self.vectors.shape[1]

    def copy(self) -> "IterateSet":
        return IterateSet(self.vectors.copy(), self.generation)


@dataclass(frozen=True)
class PairSchedule:
    """Index pairs (i, j), i < j, into an iterate set."""

    pairs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.pairs, dtype=np.int64)
        if p.ndim != 2 or p.shape[1] != 2:
            raise ConfigurationError(f"pair schedule must have shape (count, 2), got {p.shape}")
        if np.any(p[:, 0] >= p[:, 1]) or np.any(p[:, 0] < 0):
            raise ConfigurationError("pairs must satisfy 0 <= i < j")
        object.__setattr__(self, "pairs", p)

    def __len__(self) -> int:
        return len(self.pairs)


@dataclass
class SolverConfig:
    """Tunable knobs; defaults follow the plain algorithm (guard off).

    ``pair_strategy`` selects how each step draws its random pairs:
    "adaptive" (default) keys the draw to the current row offsets so the
    recombination parameters stay bounded (see
    :func:`schedule_pairs_adaptive`), "uniform" draws blindly from all
    C(L, 2) pairs. The uniform law reads nicer but is numerically
    self-destructive beyond toy sizes; see the README.
    """

    distribution: DistributionSpec | None = None
    seed: int = 0
    L: int | None = None  # None = dim + 1
    rec_tol: float = DEFAULT_REC_TOL
    guard: bool = False
    degeneracy_dist_threshold: float = 1e-8
    respread_c: float = 2.0
    reduced_updates: bool = False
    workers: int = 1
    max_retries_per_step: int = 3
    backend: str | None = None
    pair_strategy: str = "adaptive"

    def validated(self) -> "SolverConfig":
        if self.L is not None and self.L < 2:
            raise ConfigurationError(f"L must be >= 2, got {self.L}")
        if self.pair_strategy not in ("adaptive", "uniform"):
            raise ConfigurationError(f"unknown pair strategy {self.pair_strategy!r}")
        if self.rec_tol < 0:
            raise ConfigurationError(f"rec_tol must be >= 0, got {self.rec_tol}")
        if self.degeneracy_dist_threshold < 0:
            raise ConfigurationError("degeneracy_dist_threshold must be >= 0")
        if self.respread_c <= 0 or self.respread_c == 1.0:
            raise ConfigurationError(f"respread_c must be positive and != 1, got {self.respread_c}")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be >= 1, got {self.workers}")
        if self.max_retries_per_step < 0:
            raise ConfigurationError("max_retries_per_step must be >= 0")
        try:
            kernels.get_backend(self.backend)
        except (ValueError, RuntimeError) as exc:
            raise ConfigurationError(str(exc)) from exc
        return self

    @classmethod
    def strict_paper(cls, **overrides) -> "SolverConfig":
        """Literal stop-on-first-degeneracy mode: no retries, no guard, L = n+1."""
        overrides.update(max_retries_per_step=0, guard=False, L=None, reduced_updates=False)
        return cls(**overrides)


@dataclass
class SolveReport:
    """Outcome of one solve; claims are limited to ``completed_steps`` rows.

    ``status`` is "solved" only when every output vector satisfies all m
    equations within feas_tol(m); otherwise "partial" with the longest
    verified prefix. ``flops`` covers the algorithm's arithmetic only
    (recombinations, guard adjustments), not post-hoc residual checks.
    """

    status: str
    completed_steps: int
    rows: int
    cols: int
    iterates: IterateSet
    max_residual: float
    feas_tolerance: float
    flops: FlopCounter
    wall_time_ns: int
    retries_used: int
    seed: int
    backend: str
    config: SolverConfig

    @property
    def solved(self) -> bool:
        return self.status == "solved"

    @property
    def solution(self) -> np.ndarray:
        """First output vector (all of them solve the claimed prefix)."""
        return self.iterates.vectors[0]


def _draw_pair(generator: np.random.Generator, L: int) -> tuple[int, int]:
    # Uniform over unordered pairs: each {i, j} arises from exactly two
    # ordered draws of probability 1/(L(L-1)).
    i = int(generator.integers(L))
    j = int(generator.integers(L - 1))
    if j >= i:
        j += 1
    return (i, j) if i < j else (j, i)


def _first_unseen_pair(L: int, seen: set) -> tuple[int, int] | None:
    for i in range(L):
        for j in range(i + 1, L):
            if (i, j) not in seen:
                return (i, j)
    return None


def schedule_pairs_adaptive(generator: np.random.Generator, offsets: np.ndarray,
                            count: int,
                            amp_cap: float = 2.5,
                            copy_margin: float = 0.15,
                            dilution: float = 1.15) -> np.ndarray:
    """Random pair schedule keyed to the row offsets of the current iterates.

    ``offsets[l]`` is a_k . v_l - b_k. The recombination parameter a pair
    (b, j) will produce is exactly t = off_b / (off_b - off_j), and the
    residual noise already carried by the parents is amplified by at most
    max(|t|, |1-t|). Blind uniform pairing draws denominators arbitrarily
    close to ties, which makes that amplification heavy-tailed and sinks
    the feasibility ladder within a few dozen steps, so pairs are chosen
    with bounded amplification instead:

    * every iterate serves as the base of one slot (random order), keeping
      the whole population alive;
    * a base prefers partners on the other side of the hyperplane (t in
      [0, 1], no amplification), taking a near-minimal |t| among them with
      a randomized tie-break so no partner becomes a hub;
    * near one (t ~ 1) is refused while alternatives exist, because such a
      slot would clone its partner and seed duplicate iterates;
    * when a base has no straddling partner (the whole cloud is on one
      side), mild bounded extrapolation up to ``amp_cap`` is allowed;
      only a geometrically exhausted cloud falls through to an uncapped
      pair.

    Pairs are distinct whenever count <= C(L, 2). Draws come only from
    ``generator``, so the schedule is a pure function of the stream state.
    """
    L = len(offsets)
    u = offsets[:, None]
    den = u - offsets[None, :]
    ties = den == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        t_mat = np.where(ties, np.inf, u / np.where(ties, 1.0, den))
    np.fill_diagonal(t_mat, np.inf)
    abs_t = np.abs(t_mat)
    amplification = np.maximum(abs_t, np.abs(1.0 - t_mat))
    not_copy = np.abs(1.0 - t_mat) >= copy_margin

    total = L * (L - 1) // 2
    bases = generator.permutation(L)
    out = np.empty((count, 2), dtype=np.int64)
    seen: set[tuple[int, int]] = set()
    for q in range(count):
        b = int(bases[q % L])
        key = None
        for mask in ((amplification[b] <= 1.0) & not_copy[b],
                     (amplification[b] <= amp_cap) & not_copy[b],
                     amplification[b] <= amp_cap,
                     np.isfinite(t_mat[b])):
            js = np.flatnonzero(mask)
            if len(js) == 0:
                continue
            quality = abs_t[b][js]
            order = np.argsort(quality)
            near = js[quality <= dilution * quality[order[0]] + 0.02]
            shuffled = generator.permutation(len(near)) if len(near) > 1 else (0,)
            for oi in shuffled:
                j = int(near[int(oi)])
                cand = (b, j) if b < j else (j, b)
                if cand not in seen:
                    key = cand
                    break
            if key is None:
                for j in map(int, js[order]):
                    cand = (b, j) if b < j else (j, b)
                    if cand not in seen:
                        key = cand
                        break
            if key is not None:
                break
        if key is None and len(seen) < total:
            key = _first_unseen_pair(L, seen)
        if key is None:
            key = _draw_pair(generator, L)
        seen.add(key)
        out[q] = key
    return out


def choose_pairs(rng: RngState, L: int, count: int) -> PairSchedule:
    """``count`` pairs from the C(L,2) unordered pairs, distinct when possible.

    Sampling is without replacement (rejection against a seen-set) whenever
    count <= C(L,2); otherwise duplicates are unavoidable and draws are
    independent.
    """
    if L < 2:
        raise ConfigurationError(f"need at least 2 iterates to form pairs, got L={L}")
    if count < 1:
        raise ConfigurationError(f"pair count must be >= 1, got {count}")
    total = L * (L - 1) // 2
    out = np.empty((count, 2), dtype=np.int64)
    if count <= total:
        seen: set[tuple[int, int]] = set()
        filled = 0
        while filled < count:
            pair = _draw_pair(rng.generator, L)
            if pair in seen:
                continue
            seen.add(pair)
            out[filled] = pair
            filled += 1
    else:
        for idx in range(count):
            out[idx] = _draw_pair(rng.generator, L)
    return PairSchedule(out)


def degeneracy_guard(u: np.ndarray, w: np.ndarray, config: SolverConfig,
                     counter: FlopCounter | None = None):
    """Stabilization of one pair before recombining (opt-in via config.guard).

    Returns (w_adjusted, action) with action one of None, "respread",
    "contract". A nearly coincident pair is respread away from u by factor
    respread_c > 1; a pair spread further than GUARD_FAR_RATIO times ||u||
    is contracted halfway. Identical vectors cannot be respread (c*0 = 0);
    the unchanged pair then fails recombination and is redrawn there.
    """
    nu = float(np.linalg.norm(u))
    nw = float(np.linalg.norm(w))
    d = float(np.linalg.norm(w - u))
    n = u.shape[0]
    if counter is not None:
        counter.add(muls=3 * n, adds=4 * n - 3)
    if d < config.degeneracy_dist_threshold * max(nu, nw, 1.0):
        if d == 0.0:
            return w, None
        if counter is not None:
            counter.add(muls=n, adds=2 * n)
        return u + config.respread_c * (w - u), "respread"
    if d > GUARD_FAR_RATIO * max(nu, 1.0):
        if counter is not None:
            counter.add(muls=n, adds=2 * n)
        return u + 0.5 * (w - u), "contract"
    return w, None


def _fan_out(run_range: Callable, U, W, Z, T, degen,
             pool: ThreadPoolExecutor | None, workers: int) -> int:
    """Run the slot range on the pool; barrier before returning."""
    P = U.shape[0]
    if pool is None or workers <= 1 or P < 2:
        return run_range(U, W, Z, T, degen, 0, P)
    bounds = np.linspace(0, P, min(workers, P) + 1).astype(int)
    futures = [
        pool.submit(run_range, U, W, Z, T, degen, int(a), int(b))
        for a, b in zip(bounds[:-1], bounds[1:])
        if b > a
    ]
    return sum(f.result() for f in futures)


def step(iterates: IterateSet, oracle: RowOracle, k: int, config: SolverConfig,
         rng: RngState, counter: FlopCounter | None = None,
         pool: ThreadPoolExecutor | None = None,
         stats: dict | None = None) -> IterateSet:
    """One outer step: recombine scheduled pairs onto the hyperplane of row k.

    All recombinations read the generation snapshot in ``iterates`` and
    never each other's outputs. Raises :class:`StepFailure` when a slot
    stays degenerate after the configured redraws.
    """
    n = oracle.dim
    if iterates.dim != n:
        raise ConfigurationError(f"iterates have dim {iterates.dim}, oracle has {n}")
    L_prev = iterates.count
    kern = kernels.get_backend(config.backend)
    if config.reduced_updates:
        update_count = min(L_prev, max(2, n - k))
    else:
        update_count = L_prev

    V = iterates.vectors
    beta = oracle.rhs_entry(k)
    row = oracle.row_vector(k)
    if row is not None:
        row = np.ascontiguousarray(row, dtype=V.dtype)

    if config.pair_strategy == "uniform":
        pairs = choose_pairs(rng, L_prev, update_count).pairs
    else:
        # One action per iterate feeds the pair scheduler; the recombination
        # kernel recomputes its own pair of actions per slot below.
        if row is not None:
            offsets = V @ row - beta
        else:
            offsets = np.array([oracle.row_action(k, v) - beta for v in V])
        if counter is not None:
            counter.add_dot(n, count=L_prev)
            counter.add(adds=L_prev)
            ncand = L_prev * (L_prev - 1)  # denominator/parameter tableau
            counter.add(adds=2 * ncand, divs=ncand)
        pairs = schedule_pairs_adaptive(rng.generator, offsets, update_count)
    ii = pairs[:, 0]
    jj = pairs[:, 1]
    U = V[ii]  # fancy indexing copies; the snapshot V itself is never written
    W = V[jj]

    if config.guard:
        for p in range(update_count):
            W[p], _ = degeneracy_guard(U[p], W[p], config, counter)

    P = update_count
    Z = np.empty((P, n), dtype=V.dtype)
    T = np.empty(P, dtype=V.dtype)
    degen = np.zeros(P, dtype=np.uint8)

    if row is not None:
        def run_range(U_, W_, Z_, T_, degen_, start, stop):
            return kern.rec_pairs_range(U_, W_, row, beta, config.rec_tol,
                                        Z_, T_, degen_, start, stop)
    else:
        def action(vec):
            return oracle.row_action(k, vec)

        def run_range(U_, W_, Z_, T_, degen_, start, stop):
            nd = 0
            for p in range(start, stop):
                out = recombine(U_[p], W_[p], action, beta, config.rec_tol)
                if out.degenerate:
                    degen_[p] = 1
                    nd += 1
                else:
                    degen_[p] = 0
                    Z_[p] = out.z
                    T_[p] = out.t
            return nd

    n_degen = _fan_out(run_range, U, W, Z, T, degen, pool, config.workers)
    if counter is not None:
        da, dm, dd = rec_degenerate_flops(n)
        sa, sm, sd = rec_flops(n)
        ns = P - n_degen
        counter.add(adds=da * n_degen + sa * ns, muls=dm * n_degen + sm * ns,
                    divs=dd * n_degen + sd * ns)

    if n_degen:
        total_pairs = L_prev * (L_prev - 1) // 2
        z1 = np.empty((1, n), dtype=V.dtype)
        t1 = np.empty(1, dtype=V.dtype)
        d1 = np.zeros(1, dtype=np.uint8)
        for p in np.flatnonzero(degen):
            failed = (int(ii[p]), int(jj[p]))
            attempts = 0
            while degen[p] and attempts < config.max_retries_per_step:
                attempts += 1
                if stats is not None:
                    stats["retries"] = stats.get("retries", 0) + 1
                pair = _draw_pair(rng.generator, L_prev)
                if total_pairs > 1:
                    while pair == failed:
                        pair = _draw_pair(rng.generator, L_prev)
                u2 = V[pair[0]]
                w2 = V[pair[1]]
                if config.guard:
                    w2, _ = degeneracy_guard(u2, w2, config, counter)
                    w2 = np.ascontiguousarray(w2)
                d1[0] = 0
                bad = run_range(u2[None, :], w2[None, :], z1, t1, d1, 0, 1)
                if counter is not None:
                    da, dm, dd = rec_degenerate_flops(n)
                    sa, sm, sd = rec_flops(n)
                    if bad:
                        counter.add(adds=da, muls=dm, divs=dd)
                    else:
                        counter.add(adds=sa, muls=sm, divs=sd)
                if not bad:
                    Z[p] = z1[0]
                    T[p] = t1[0]
                    degen[p] = 0
                failed = pair
            if degen[p]:
                raise StepFailure(row=k, slot=int(p), attempts=attempts)

    return IterateSet(vectors=Z, generation=iterates.generation + 1)


def _row_residuals(oracle: RowOracle, vectors: np.ndarray, upto: int) -> np.ndarray:
    """Per-row max residual over all candidate vectors, rows [0, upto)."""
    if upto == 0:
        return np.zeros(0)
    matrix = getattr(oracle, "matrix", None)
    if matrix is not None:
        resid = matrix[:upto] @ vectors.T - getattr(oracle, "rhs")[:upto, None]
        return np.max(np.abs(resid), axis=1)
    out = np.empty(upto)
    for j in range(upto):
        bj = oracle.rhs_entry(j)
        out[j] = max(abs(oracle.row_action(j, v) - bj) for v in vectors)
    return out


def _verified_prefix(oracle: RowOracle, iterates: IterateSet, completed: int,
                     b_inf: float) -> tuple[int, float]:
    """Longest prefix k <= completed with all residuals within feas_tol(k)."""
    residuals = _row_residuals(oracle, iterates.vectors, completed)
    running = np.maximum.accumulate(residuals) if completed else residuals
    for k in range(completed, 0, -1):
        if running[k - 1] <= feas_tol(k, b_inf):
            return k, float(running[k - 1])
    return 0, 0.0


def solve(oracle: RowOracle, config: SolverConfig | None = None) -> SolveReport:
    """Run the full sweep over all rows and report the verified outcome.

    Requires m <= n (full row rank is assumed, never verified). The report
    never claims more than it checks: completed steps are re-verified
    against feas_tol at the end and demoted to the longest valid prefix if
    floating-point drift broke the ladder.
    """
    config = (config or SolverConfig()).validated()
    m, n = oracle.row_count, oracle.dim
    if m > n:
        raise ConfigurationError(f"system must have m <= n rows, got {m}x{n}")

    spec = config.distribution or DistributionSpec("gaussian", n)
    spec = spec.with_dim(n)
    if is_complex_dtype(oracle.dtype) and not spec.is_complex:
        spec = replace(spec, dtype=COMPLEX)
    L = config.L if config.L is not None else n + 1

    root = RngState(config.seed)
    counter = FlopCounter()
    stats = {"retries": 0}
    b_inf = float(oracle.rhs_inf_norm())

    t0 = time.perf_counter_ns()
    iterates = sample_iterates(spec, root.split(_STREAM_INIT), L)
    pool = ThreadPoolExecutor(max_workers=config.workers) if config.workers > 1 else None
    failed_at: int | None = None
    try:
        for k in range(m):
            try:
                iterates = step(iterates, oracle, k, config,
                                root.split(_STREAM_STEP, k),
                                counter=counter, pool=pool, stats=stats)
            except StepFailure:
                failed_at = k
                break
    finally:
        if pool is not None:
            pool.shutdown(wait=True)
    wall = time.perf_counter_ns() - t0

    completed = m if failed_at is None else failed_at
    verified, max_res = _verified_prefix(oracle, iterates, completed, b_inf)
    status = "solved" if (failed_at is None and verified == m) else "partial"

    return SolveReport(
        status=status,
        completed_steps=verified,
        rows=m,
        cols=n,
        iterates=iterates,
        max_residual=max_res,
        feas_tolerance=feas_tol(verified, b_inf),
        flops=counter,
        wall_time_ns=wall,
        retries_used=stats["retries"],
        seed=config.seed,
        backend=config.backend or kernels.DEFAULT_BACKEND,
        config=config,
    )
