import numpy as np
import pytest

from xnbf import PhantomSpec, make_phantom

# 5x5 worked example matrix used throughout the shift tests
MATRIX_A = np.arange(1, 26, dtype=np.float64).reshape(5, 5)


@pytest.fixture(scope="session")
def matrix_a():
    return MATRIX_A.copy()


@pytest.fixture(scope="session")
def phantom_1pct():
    return make_phantom(PhantomSpec(noise_percent=1.0, seed=7))


@pytest.fixture(scope="session")
def phantom_clean():
    return make_phantom(PhantomSpec())
