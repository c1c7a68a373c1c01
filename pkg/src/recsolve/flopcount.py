"""Deterministic floating-point operation counting.

Counting is analytic: each instrumented kernel call charges a closed-form
tally derived from its input size, so totals are exact, portable, and
identical across repeated runs, worker counts, and kernel backends. A
complex add/multiply/divide counts as one operation of its kind, the same
as a real one. Comparisons, magnitude tests, and square roots are not
counted; neither is random number generation.
"""
from __future__ import annotations


class FlopCounter:
    """Tallies of adds, multiplies, and divides; monotone within a run."""

    __slots__ = ("adds", "muls", "divs")

    def __init__(self, adds: int = 0, muls: int = 0, divs: int = 0):
        self.adds = adds
        self.muls = muls
        self.divs = divs

    @property
    def total(self) -> int:
        return self.adds + self.muls + self.divs

    def add(self, adds: int = 0, muls: int = 0, divs: int = 0) -> None:
        self.adds += adds
        self.muls += muls
        self.divs += divs

    def add_dot(self, n: int, count: int = 1) -> None:
        """Charge ``count`` inner products of length ``n``."""
        self.muls += n * count
        self.adds += (n - 1) * count

    def merge(self, other: "FlopCounter") -> None:
        self.adds += other.adds
        self.muls += other.muls
        self.divs += other.divs

    def snapshot(self) -> "FlopCounter":
        return FlopCounter(self.adds, self.muls, self.divs)

    def as_dict(self) -> dict:
        return {"adds": self.adds, "muls": self.muls, "divs": self.divs, "total": self.total}

    def __eq__(self, other) -> bool:
        if not isinstance(other, FlopCounter):
            return NotImplemented
        return (self.adds, self.muls, self.divs) == (other.adds, other.muls, other.divs)

    def __repr__(self) -> str:
        return f"FlopCounter(adds={self.adds}, muls={self.muls}, divs={self.divs})"


def counted_dot(u, v, counter: FlopCounter | None = None, conjugate_left: bool = False):
    """Inner product through the active kernel backend, charged to ``counter``.

    Charges n multiplies and n-1 adds for vectors of length n. With
    ``conjugate_left`` the left argument is conjugated entrywise, which is
    the identity on the real field.
    """
    from . import kernels

    n = len(u)
    if len(v) != n:
        raise ValueError(f"dot of length-{n} and length-{len(v)} vectors")
    if counter is not None:
        counter.add_dot(n)
    return kernels.active().dot_seq(u, v, conjugate_left)


def rec_flops(n: int) -> tuple[int, int, int]:
    """(adds, muls, divs) of one successful recombination in dimension n.

    Two inner products, two scalar subtractions, one divide, one complement,
    and the axpy-style combination z = t*u + (1-t)*v.
    """
    return 3 * n + 1, 4 * n, 1


def rec_degenerate_flops(n: int) -> tuple[int, int, int]:
    """(adds, muls, divs) spent before a recombination bails out as degenerate."""
    return 2 * n - 1, 2 * n, 0
