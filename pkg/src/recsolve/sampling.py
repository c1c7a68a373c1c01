"""Seedable samplers for the random start vectors.

All randomness in a run (start vectors and pair choices) derives from one
64-bit seed through a counter-based Philox generator. Child streams are
split off deterministically by integer key paths, so parallel execution and
retries can never perturb reproducibility.

Supported laws are continuous (Gaussian, uniform on an interval per
coordinate, uniform on the unit sphere), so any fixed hyperplane carries
probability zero; discrete laws are deliberately not offered.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .scalars import REAL, field_dtype, is_complex_dtype

KINDS = ("gaussian", "uniform", "sphere")


@dataclass(frozen=True)
class DistributionSpec:
    """Law of one start vector: kind, dimension, parameters, and field.

    For the complex field, real and imaginary parts are drawn independently
    with the same parameters; the sphere kind normalizes to unit Euclidean
    norm in either field.
    """

    kind: str
    dim: int
    mean: float = 0.0
    stddev: float = 1.0
    lo: float = -1.0
    hi: float = 1.0
    dtype: np.dtype = field(default=REAL)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown distribution kind {self.kind!r}; expected one of {KINDS}")
        if self.dim < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dim}")
        if self.kind == "gaussian" and not self.stddev > 0:
            raise ValueError(f"gaussian stddev must be > 0, got {self.stddev}")
        if self.kind == "uniform" and not self.lo < self.hi:
            raise ValueError(f"uniform interval needs lo < hi, got [{self.lo}, {self.hi}]")
        object.__setattr__(self, "dtype", field_dtype(self.dtype))

    @property
    def is_complex(self) -> bool:
        return is_complex_dtype(self.dtype)

    def with_dim(self, dim: int) -> "DistributionSpec":
        return DistributionSpec(self.kind, dim, self.mean, self.stddev, self.lo, self.hi, self.dtype)


class RngState:
    """Deterministic stream state: a Philox generator plus its split path.

    ``split(*key)`` derives an independent child stream from (seed, key
    path); the same path always yields the same stream, regardless of what
    was drawn elsewhere.
    """

    def __init__(self, seed: int, _path: tuple[int, ...] = ()):
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = seed
        self._path = tuple(int(k) for k in _path)
        self._seq = np.random.SeedSequence(seed, spawn_key=self._path)
        self.generator = np.random.Generator(np.random.Philox(self._seq))

    def split(self, *key: int) -> "RngState":
        return RngState(self.seed, self._path + key)

    def __repr__(self) -> str:
        return f"RngState(seed={self.seed}, path={self._path})"


def sample_vector(spec: DistributionSpec, rng: RngState) -> np.ndarray:
    """One draw of the start-vector law, advancing ``rng``'s stream."""
    g = rng.generator
    n = spec.dim
    if spec.kind == "gaussian":
        x = spec.mean + spec.stddev * g.standard_normal(n)
        if spec.is_complex:
            x = x + 1j * (spec.mean + spec.stddev * g.standard_normal(n))
    elif spec.kind == "uniform":
        x = g.uniform(spec.lo, spec.hi, n)
        if spec.is_complex:
            x = x + 1j * g.uniform(spec.lo, spec.hi, n)
    else:  # sphere: normalized Gaussian draw, exactly uniform on the sphere
        x = g.standard_normal(n)
        if spec.is_complex:
            x = x + 1j * g.standard_normal(n)
        x = x / np.linalg.norm(x)
    return np.ascontiguousarray(x, dtype=spec.dtype)


def sample_iterates(spec: DistributionSpec, rng: RngState, L: int):
    """L independent draws packed into an iterate set; requires L >= dim + 1."""
    from .solver import ConfigurationError, IterateSet

    if L < spec.dim + 1:
        raise ConfigurationError(f"need at least dim+1 = {spec.dim + 1} iterates, got L={L}")
    vectors = np.stack([sample_vector(spec, rng) for _ in range(L)])
    return IterateSet(vectors=vectors, generation=0)
