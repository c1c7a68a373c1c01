import numpy as np
import pytest

from recsolve.sampling import DistributionSpec, RngState, sample_iterates, sample_vector
from recsolve.scalars import COMPLEX
from recsolve.solver import ConfigurationError


def test_same_seed_bitwise_identical():
    spec = DistributionSpec("gaussian", 3)
    a = sample_vector(spec, RngState(7))
    b = sample_vector(spec, RngState(7))
    assert np.array_equal(a, b)


def test_different_streams_differ():
    spec = DistributionSpec("gaussian", 3)
    root = RngState(7)
    assert not np.array_equal(sample_vector(spec, root.split(0)),
                              sample_vector(spec, root.split(1)))


def test_split_is_path_deterministic():
    a = RngState(5).split(1, 3).generator.integers(1 << 30, size=4)
    b = RngState(5).split(1, 3).generator.integers(1 << 30, size=4)
    assert np.array_equal(a, b)


def test_sphere_norm_within_tolerance():
    spec = DistributionSpec("sphere", 4)
    for seed in (0, 1, 2):
        v = sample_vector(spec, RngState(seed))
        assert abs(np.linalg.norm(v) - 1.0) <= 1e-12


def test_uniform_sample_mean():
    spec = DistributionSpec("uniform", 2)
    rng = RngState(42)
    draws = np.stack([sample_vector(spec, rng) for _ in range(10**5)])
    means = draws.mean(axis=0)
    assert np.all(np.abs(means) < 0.02)


def test_sphere_coordinate_means():
    for n in (2, 4, 8):
        g = RngState(7).generator
        x = g.standard_normal((10**5, n))
        x /= np.linalg.norm(x, axis=1)[:, None]
        assert np.abs(x.mean(axis=0)).max() < 0.02


def test_hyperplane_hit_distribution():
    # continuous-density smoke test: no exact hyperplane hits, and the mass
    # near the hyperplane scales about linearly in the window width
    g = RngState(0).generator
    xi = g.standard_normal((10**6, 4))
    a = np.array([0.3, -1.2, 0.7, 2.0])
    vals = np.abs(xi @ a - 0.5)
    assert int((vals == 0.0).sum()) == 0
    counts = [(vals < d).sum() for d in (1e-3, 1e-4, 1e-5)]
    assert counts[2] > 0
    assert 5 <= counts[0] / counts[1] <= 20
    assert 5 <= counts[1] / counts[2] <= 20


def test_iterates_distinct():
    spec = DistributionSpec("gaussian", 2)
    its = sample_iterates(spec, RngState(1), 3)
    v = its.vectors
    assert its.generation == 0
    for i in range(3):
        for j in range(i + 1, 3):
            assert not np.array_equal(v[i], v[j])


def test_iterates_scalar_dim():
    its = sample_iterates(DistributionSpec("gaussian", 1), RngState(1), 2)
    assert its.vectors.shape == (2, 1)
    assert its.vectors[0, 0] != its.vectors[1, 0]


def test_iterates_consume_one_stream():
    spec = DistributionSpec("gaussian", 3)
    its = sample_iterates(spec, RngState(5), 6)
    rng = RngState(5)
    first_four = np.stack([sample_vector(spec, rng) for _ in range(4)])
    assert np.array_equal(its.vectors[:4], first_four)


def test_iterate_count_validated():
    with pytest.raises(ConfigurationError):
        sample_iterates(DistributionSpec("gaussian", 3), RngState(0), 3)


def test_spec_validation():
    with pytest.raises(ValueError):
        DistributionSpec("gaussian", 3, stddev=0.0)
    with pytest.raises(ValueError):
        DistributionSpec("uniform", 3, lo=1.0, hi=-1.0)
    with pytest.raises(ValueError):
        DistributionSpec("lattice", 3)
    with pytest.raises(ValueError):
        DistributionSpec("gaussian", 0)


def test_complex_field_draws():
    spec = DistributionSpec("gaussian", 4, dtype=COMPLEX)
    v = sample_vector(spec, RngState(2))
    assert v.dtype == COMPLEX
    assert np.any(v.imag != 0)
    s = DistributionSpec("sphere", 4, dtype=COMPLEX)
    w = sample_vector(s, RngState(2))
    assert abs(np.linalg.norm(w) - 1.0) <= 1e-12


def test_seed_range_validated():
    with pytest.raises(ValueError):
        RngState(-1)
    with pytest.raises(ValueError):
        RngState(2**64)
