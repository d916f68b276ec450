import numpy as np
import pytest

from app.src.models.network_models import NetworkParams

# Influence weights of four individuals from an empirical social-network study
FRIEDKIN = np.array([
    [0.220, 0.120, 0.360, 0.300],
    [0.147, 0.215, 0.344, 0.294],
    [0.000, 0.000, 1.000, 0.000],
    [0.090, 0.178, 0.446, 0.286],
])
FRIEDKIN_C = np.array([0.13, 0.28, 0.08, 0.24])


@pytest.fixture
def friedkin_params() -> NetworkParams:
    """A = Friedkin / 2, c = (0.065, 0.14, 0.04, 0.12), unit noise."""
    return NetworkParams.from_arrays(FRIEDKIN / 2, FRIEDKIN_C / 2)


@pytest.fixture
def friedkin_raw_params() -> NetworkParams:
    """The same network before standardisation: noise variance 4."""
    return NetworkParams.from_arrays(FRIEDKIN, FRIEDKIN_C, sigma=[2.0, 2.0, 2.0, 2.0])


@pytest.fixture
def hand_params() -> NetworkParams:
    return NetworkParams.from_arrays([[0.8, -0.3], [0.4, 0.5]], [0.1, -0.2])


@pytest.fixture
def make_random_params():
    """Factory: random valid sigma = 1 params with entries in [-scale, scale]."""
    def factory(rng: np.random.Generator, n: int, scale: float = 1.0, sigma=None) -> NetworkParams:
        A = rng.uniform(-scale, scale, size=(n, n))
        c = rng.uniform(-0.5 * scale, 0.5 * scale, size=n)
        return NetworkParams.from_arrays(A, c, sigma=sigma)
    return factory
