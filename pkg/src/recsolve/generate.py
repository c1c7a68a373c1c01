"""Random test systems with controllable difficulty."""
from __future__ import annotations

import numpy as np

from .sampling import RngState
from .scalars import COMPLEX, REAL

# Stream namespace for system generation, disjoint from the solver's
# init/step namespaces so `--random N --seed S` and the solve itself draw
# independent randomness from one seed.
_STREAM_SYSTEM = 2


def random_system(n: int, m: int | None = None, seed: int = 0,
                  cond: float | None = None, complex_field: bool = False):
    """(matrix, rhs) with i.i.d. standard Gaussian entries, m <= n.

    With ``cond``, rows are rescaled by a geometric diagonal running from 1
    down to 1/cond, which drives the condition number toward the target
    (approximately; the Gaussian factor adds its own conditioning).
    """
    if m is None:
        m = n
    if m < 1 or n < 1:
        raise ValueError(f"system size must be positive, got {m}x{n}")
    if m > n:
        raise ValueError(f"need m <= n for a full-row-rank system, got {m}x{n}")
    g = RngState(seed).split(_STREAM_SYSTEM).generator
    a = g.standard_normal((m, n))
    b = g.standard_normal(m)
    if complex_field:
        a = a + 1j * g.standard_normal((m, n))
        b = b + 1j * g.standard_normal(m)
    if cond is not None:
        if cond < 1:
            raise ValueError(f"condition target must be >= 1, got {cond}")
        if m > 1:
            d = np.geomspace(1.0, 1.0 / cond, m)
            a = d[:, None] * a
            b = d * b
    dtype = COMPLEX if complex_field else REAL
    return a.astype(dtype), b.astype(dtype)
