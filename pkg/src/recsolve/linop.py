"""Linear system access: dense storage and the matrix-free row oracle.

The solver sees a system only through row actions v -> a_k . v and
right-hand entries k -> b_k. A dense matrix is one backing for that
interface; anything that can evaluate the action of its rows works. Row
actions are bilinear (no conjugation), so a stored complex matrix A is
solved as A x = b literally; conjugated inner products live in
:mod:`recsolve.scalars` and are used for norms only.

Row indices are 0-based throughout.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from .scalars import as_field_array, result_dtype


class DimensionMismatch(ValueError):
    """Shapes of matrix, right-hand side, or probe vector disagree."""


def as_matrix(a) -> np.ndarray:
    """Validate and coerce a dense m x n matrix (row-major, field dtype)."""
    arr = as_field_array(a)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionMismatch(f"matrix must be 2-D and nonempty, got shape {arr.shape}")
    return arr

def as_rhs(b, rows: int | None = None) -> np.ndarray:
    arr = as_field_array(b)
    if arr.ndim != 1 or arr.shape[0] < 1:
        raise DimensionMismatch(f"right-hand side must be 1-D and nonempty, got shape {arr.shape}")
    if rows is not None and arr.shape[0] != rows:
        raise DimensionMismatch(f"right-hand side has {arr.shape[0]} entries for {rows} rows")
    return arr


class RowOracle:
    """Abstract access to rows of A and entries of b through their actions.

    Implementations must be read-only after construction: concurrent
    ``row_action`` calls from any number of threads must be safe.
    """

    row_count: int
    dim: int
    dtype: np.dtype

    def __init__(self, row_count: int, dim: int,
                 row_action: Callable[[int, np.ndarray], complex] | None = None,
                 rhs_entry: Callable[[int], complex] | None = None,
                 dtype=np.float64):
        if row_count < 1 or dim < 1:
            raise DimensionMismatch("oracle needs row_count >= 1 and dim >= 1")
        self.row_count = row_count
        self.dim = dim
        self.dtype = np.dtype(dtype)
        self._row_action = row_action
        self._rhs_entry = rhs_entry

    def row_action(self, k: int, v: np.ndarray):
        """a_k . v (bilinear product of row k with v)."""
        self._check_row(k)
        if self._row_action is None:
            raise NotImplementedError
        return self._row_action(k, v)

    def rhs_entry(self, k: int):
        self._check_row(k)
        if self._rhs_entry is None:
            raise NotImplementedError
        return self._rhs_entry(k)

    def row_vector(self, k: int) -> np.ndarray | None:
        """Row k as a dense vector when the backing can expose one, else None.

        Purely an optimization hook for the kernels; the solver never
        requires it.
        """
        return None

    def rhs_inf_norm(self) -> float:
        return max(abs(self.rhs_entry(k)) for k in range(self.row_count))

    def residual_inf(self, x: np.ndarray, upto: int | None = None) -> float:
        """max_k |a_k . x - b_k| over rows [0, upto)."""
        m = self.row_count if upto is None else upto
        if m == 0:
            return 0.0
        return max(abs(self.row_action(k, x) - self.rhs_entry(k)) for k in range(m))

    def _check_row(self, k: int) -> None:
        if not 0 <= k < self.row_count:
            raise IndexError(f"row index {k} out of range [0, {self.row_count})")


class DenseRowOracle(RowOracle):
    """Row oracle backed by a dense matrix and right-hand side."""

    def __init__(self, matrix, rhs):
        a = as_matrix(matrix)
        b = as_rhs(rhs, a.shape[0])
        dtype = result_dtype(a, b)
        self.matrix = np.ascontiguousarray(a, dtype=dtype)
        self.rhs = np.ascontiguousarray(b, dtype=dtype)
        super().__init__(a.shape[0], a.shape[1], dtype=dtype)

    def row_action(self, k: int, v: np.ndarray):
        self._check_row(k)
        v = np.asarray(v)
        if v.shape != (self.dim,):
            raise DimensionMismatch(f"probe vector has shape {v.shape}, expected ({self.dim},)")
        return np.dot(self.matrix[k], v)

    def rhs_entry(self, k: int):
        self._check_row(k)
        return self.rhs[k]

    def row_vector(self, k: int) -> np.ndarray:
        self._check_row(k)
        return self.matrix[k]

    def rhs_inf_norm(self) -> float:
        return float(np.max(np.abs(self.rhs)))

    def residual_inf(self, x: np.ndarray, upto: int | None = None) -> float:
        m = self.row_count if upto is None else upto
        if m == 0:
            return 0.0
        r = self.matrix[:m] @ np.asarray(x) - self.rhs[:m]
        return float(np.max(np.abs(r)))


def oracle_from_dense(matrix, rhs) -> DenseRowOracle:
    """Dense-backed oracle; rejects mismatched dimensions at construction."""
    return DenseRowOracle(matrix, rhs)


def residual_inf(matrix, rhs, x) -> float:
    """max_k |a_k . x - b_k| for a dense system."""
    a = as_matrix(matrix)
    b = as_rhs(rhs, a.shape[0])
    x = np.asarray(x)
    if x.shape != (a.shape[1],):
        raise DimensionMismatch(f"solution has shape {x.shape}, expected ({a.shape[1]},)")
    return float(np.max(np.abs(a @ x - b)))
