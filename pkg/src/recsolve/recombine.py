"""Recombination: move along the line through u and v onto a hyperplane.

Given the action s -> a . s of a row vector and a target value beta, the
point z = t*u + (1-t)*v with t = (beta - a.v) / (a.u - a.v) satisfies
a . z = beta whenever the denominator is nonzero. Since z is an affine
combination of u and v, it also stays inside every affine subspace that
contains both, which is what lets the solver keep previously satisfied
equations satisfied.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .flopcount import FlopCounter
from .scalars import TINY

DEFAULT_REC_TOL = 1e-12


@dataclass(frozen=True)
class RecOutcome:
    """Result of one recombination: a point and parameter, or degeneracy.

    ``denominator_magnitude`` is always filled; on a degenerate outcome it
    records how close to zero the rejected denominator was.
    """

    z: np.ndarray | None
    t: complex | float | None
    denominator_magnitude: float

    @property
    def degenerate(self) -> bool:
        return self.z is None

    @classmethod
    def success(cls, z, t, den_mag):
        return cls(z=z, t=t, denominator_magnitude=den_mag)

    @classmethod
    def failure(cls, den_mag):
        return cls(z=None, t=None, denominator_magnitude=den_mag)


def recombine(u: np.ndarray, v: np.ndarray,
              a_action: Callable[[np.ndarray], complex],
              beta, tol: float = DEFAULT_REC_TOL,
              counter: FlopCounter | None = None) -> RecOutcome:
    """Point on line(u, v) whose row action equals beta, or a degeneracy report.

    The row enters only through ``a_action``, uniform with the matrix-free
    oracle. Degeneracy is declared relatively: |a.u - a.v| <= tol * scale
    with scale = max(|a.u|, |a.v|, smallest positive normal number). A
    degenerate outcome is a value, not an exception.

    Flop accounting assumes each action evaluation costs one length-n inner
    product, which is exact for dense-backed oracles.
    """
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape or u.ndim != 1:
        raise ValueError(f"endpoints must be 1-D of equal length, got {u.shape} and {v.shape}")
    if tol < 0:
        raise ValueError(f"tolerance must be >= 0, got {tol}")
    n = u.shape[0]

    # Two action evaluations only; the denominator a.(u-v) comes from their
    # difference rather than from forming u-v.
    su = a_action(u)
    sv = a_action(v)
    den = su - sv
    den_mag = abs(den)
    if counter is not None:
        counter.add_dot(n, count=2)
        counter.add(adds=1)
    if den_mag <= tol * max(abs(su), abs(sv), TINY):
        return RecOutcome.failure(den_mag)

    t = (beta - sv) / den
    omt = 1 - t
    z = t * u + omt * v
    if counter is not None:
        counter.add(adds=2 + n, muls=2 * n, divs=1)
    return RecOutcome.success(z, t, den_mag)
