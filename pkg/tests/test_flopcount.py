import numpy as np
import pytest

from recsolve.flopcount import FlopCounter, counted_dot, rec_degenerate_flops, rec_flops


def test_counted_dot_charges_by_definition():
    c = FlopCounter()
    val = counted_dot(np.ones(3), np.ones(3), c)
    assert val == 3.0
    assert (c.muls, c.adds, c.divs) == (3, 2, 0)


def test_counted_dot_length_one():
    c = FlopCounter()
    counted_dot(np.array([2.0]), np.array([4.0]), c)
    assert (c.muls, c.adds) == (1, 0)


def test_counted_dot_conjugates_left():
    val = counted_dot(np.array([1j]), np.array([1j]), conjugate_left=True)
    assert val == pytest.approx(1.0)
    plain = counted_dot(np.array([1j]), np.array([1j]))
    assert plain == pytest.approx(-1.0)


def test_counted_dot_rejects_mismatch():
    with pytest.raises(ValueError):
        counted_dot(np.ones(3), np.ones(2))


def test_counter_merge_and_total():
    a = FlopCounter(adds=1, muls=2, divs=3)
    b = FlopCounter(adds=10, muls=20, divs=30)
    a.merge(b)
    assert a == FlopCounter(adds=11, muls=22, divs=33)
    assert a.total == 66
    assert a.as_dict()["total"] == 66


def test_rec_flop_formulas_consistent():
    # one successful recombination: 2 dots, 2 subtractions, 1 divide,
    # 1 complement, and the n-element combination
    for n in (1, 5, 64):
        adds, muls, divs = rec_flops(n)
        assert adds + muls + divs == 7 * n + 2
        da, dm, dd = rec_degenerate_flops(n)
        assert da + dm + dd == 4 * n - 1
