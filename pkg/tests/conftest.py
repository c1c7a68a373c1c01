import numpy as np
import pytest

import recsolve


@pytest.fixture
def tiny_system():
    matrix = np.array([[1.0, 0.0], [0.0, 1.0]])
    rhs = np.array([3.0, 4.0])
    return matrix, rhs


@pytest.fixture
def write_file(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write


@pytest.fixture
def seeded_system():
    def _make(n, m=None, seed=0, **kw):
        return recsolve.random_system(n, m, seed=seed, **kw)

    return _make
