"""Pure-Python (numpy) fallback for the recombination kernels.

Same call surface as the compiled module. Each slot is computed through
per-slot numpy calls, never batched across slots, so output bits do not
depend on how a slot range is chunked across workers.
"""
from __future__ import annotations

import numpy as np

from .scalars import TINY


def dot_seq(u, v, conjugate_left: bool = False):
    if conjugate_left:
        out = np.vdot(u, v)
    else:
        out = np.dot(u, v)
    return complex(out) if np.iscomplexobj(out) else float(out)


def rec_pairs_range(U, W, row, beta, tol, out_z, out_t, degen, start, stop):
    """Recombine slots [start, stop); see the compiled twin for the contract."""
    n_degen = 0
    for p in range(start, stop):
        u = U[p]
        w = W[p]
        su = np.dot(row, u)
        sv = np.dot(row, w)
        den = su - sv
        scale = max(abs(su), abs(sv), TINY)
        if abs(den) <= tol * scale:
            degen[p] = 1
            n_degen += 1
            continue
        degen[p] = 0
        t = (beta - sv) / den
        out_t[p] = t
        np.multiply(u, t, out=out_z[p])
        out_z[p] += (1 - t) * w
    return n_degen
