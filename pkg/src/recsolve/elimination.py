"""Gaussian elimination with partial pivoting: verification baseline.

Used as ground truth for the randomized solver and as the flop-count
reference. The counter reports raw adds/multiplies/divides, about
(2/3) n^3 + O(n^2) in total; the classical 'n^3 / 3' constant counts
multiply-add pairs instead, which here equals the multiply tally alone
(every multiply outside the pivot divisions pairs with one add).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .flopcount import FlopCounter
from .linop import as_matrix, as_rhs
from .scalars import MACHINE_EPS


class SingularMatrixError(RuntimeError):
    """Pivot column is zero to working precision."""


@dataclass
class EliminationResult:
    x: np.ndarray
    pivot_growth: float
    flops: FlopCounter

    @property
    def multiply_add_pairs(self) -> int:
        """Elimination cost in the classical multiply-add-pair convention."""
        return self.flops.muls


def gauss_solve(matrix, rhs) -> EliminationResult:
    """Solve a square system by LU with partial (row) pivoting.

    Raises :class:`SingularMatrixError` when the best available pivot in
    column k is at most n * eps * ||column k of the input||_inf.
    """
    a = as_matrix(matrix).copy()
    n, cols = a.shape
    if cols != n:
        raise ValueError(f"matrix must be square, got {n}x{cols}")
    b = as_rhs(rhs, n).astype(a.dtype, copy=True)

    counter = FlopCounter()
    col_scales = np.max(np.abs(a), axis=0)
    a_max = float(np.max(np.abs(a)))
    growth_max = a_max

    for k in range(n):
        seg = np.abs(a[k:, k])
        p = int(np.argmax(seg)) + k
        if abs(a[p, k]) <= n * MACHINE_EPS * col_scales[k]:
            raise SingularMatrixError(f"singular to working precision at column {k}")
        if p != k:
            a[[k, p]] = a[[p, k]]
            b[k], b[p] = b[p], b[k]
        if k == n - 1:
            break
        r = n - k - 1
        factors = a[k + 1:, k] / a[k, k]
        a[k + 1:, k] = 0.0
        a[k + 1:, k + 1:] -= np.outer(factors, a[k, k + 1:])
        b[k + 1:] -= factors * b[k]
        counter.add(divs=r, muls=r * r + r, adds=r * r + r)
        growth_max = max(growth_max, float(np.max(np.abs(a[k:, k:]))))

    x = np.zeros(n, dtype=a.dtype)
    for i in range(n - 1, -1, -1):
        s = b[i] - np.dot(a[i, i + 1:], x[i + 1:])
        x[i] = s / a[i, i]
        r = n - 1 - i
        counter.add(muls=r, adds=r, divs=1)

    growth = growth_max / a_max if a_max > 0 else 1.0
    return EliminationResult(x=x, pivot_growth=float(growth), flops=counter)
