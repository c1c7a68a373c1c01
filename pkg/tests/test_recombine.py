import math

import numpy as np
import pytest

from recsolve.flopcount import FlopCounter
from recsolve.recombine import recombine


def _dense_action(a):
    return lambda v: np.dot(a, v)


def test_hand_example_midpoint():
    out = recombine(np.array([1.0, 0.0]), np.array([0.0, 1.0]),
                    _dense_action(np.array([1.0, 0.0])), 0.5)
    assert not out.degenerate
    assert out.t == pytest.approx(0.5)
    assert np.allclose(out.z, [0.5, 0.5])


def test_degenerate_when_actions_tie():
    out = recombine(np.array([2.0, 0.0]), np.array([1.0, 0.0]),
                    _dense_action(np.array([0.0, 1.0])), 0.0)
    assert out.degenerate
    assert out.z is None
    assert out.denominator_magnitude == 0.0


def test_t_vanishes_when_v_already_satisfies():
    v = np.array([2.0, 5.0])
    a = np.array([1.0, 1.0])
    out = recombine(np.array([9.0, 9.0]), v, _dense_action(a), float(np.dot(a, v)))
    assert out.t == 0.0
    assert np.array_equal(out.z, v)


def test_seeded_dim10_pi_target():
    g = np.random.default_rng(77)
    u, v, a = g.standard_normal((3, 10))
    out = recombine(u, v, _dense_action(a), math.pi)
    assert abs(np.dot(a, out.z) - math.pi) <= 1e-12 * (1 + math.pi)


def test_postcondition_residual_sweep():
    g = np.random.default_rng(5)
    for _ in range(500):
        n = int(g.integers(2, 65))
        u, v, a = g.standard_normal((3, n))
        beta = float(g.standard_normal())
        out = recombine(u, v, _dense_action(a), beta)
        if out.degenerate:
            continue
        bound = 1e-11 * (abs(beta) + np.linalg.norm(a) *
                         (np.linalg.norm(u) + np.linalg.norm(v)))
        assert abs(np.dot(a, out.z) - beta) <= bound


def test_affinity_preservation():
    # z stays inside every affine subspace containing both endpoints
    g = np.random.default_rng(8)
    for _ in range(200):
        n = int(g.integers(2, 17))
        u, v, a, w = g.standard_normal((4, n))
        gamma = float(np.dot(w, v))
        u = u - w * (np.dot(w, u) - gamma) / np.dot(w, w)  # force w.u == gamma
        out = recombine(u, v, _dense_action(a), 0.3)
        if out.degenerate:
            continue
        bound = 1e-11 * (abs(gamma) + np.linalg.norm(w) *
                         (np.linalg.norm(u) + np.linalg.norm(v)) * max(1.0, abs(out.t)))
        assert abs(np.dot(w, out.z) - gamma) <= bound


def test_flop_count_per_call():
    for n in (2, 16, 64):
        g = np.random.default_rng(n)
        u, v, a = g.standard_normal((3, n))
        c = FlopCounter()
        out = recombine(u, v, _dense_action(a), 1.0, counter=c)
        assert not out.degenerate
        assert c.total <= 8 * n + 8
        assert c.total == 7 * n + 2


def test_degenerate_charges_only_the_probe():
    c = FlopCounter()
    out = recombine(np.array([1.0, 0.0]), np.array([2.0, 0.0]),
                    _dense_action(np.array([0.0, 1.0])), 0.0, counter=c)
    assert out.degenerate
    assert c.total == 4 * 2 - 1


def test_relative_degeneracy_scale():
    # tiny denominator relative to large actions is degenerate
    a = np.array([1.0, 0.0])
    u = np.array([1e9, 0.0])
    v = np.array([1e9 * (1 + 1e-14), 0.0])
    out = recombine(u, v, _dense_action(a), 1.0)
    assert out.degenerate
    # same gap at unit scale is fine
    out2 = recombine(np.array([1e-5, 0.0]), np.array([2e-5, 0.0]),
                     _dense_action(a), 1e-5)
    assert not out2.degenerate


def test_complex_recombination():
    g = np.random.default_rng(4)
    u = g.standard_normal(6) + 1j * g.standard_normal(6)
    v = g.standard_normal(6) + 1j * g.standard_normal(6)
    a = g.standard_normal(6) + 1j * g.standard_normal(6)
    beta = 0.7 - 0.2j
    out = recombine(u, v, _dense_action(a), beta)
    assert abs(np.dot(a, out.z) - beta) <= 1e-11 * (1 + abs(beta))


def test_input_validation():
    act = _dense_action(np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        recombine(np.ones(2), np.ones(3), act, 0.0)
    with pytest.raises(ValueError):
        recombine(np.ones(2), np.ones(2), act, 0.0, tol=-1.0)
