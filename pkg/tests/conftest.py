import numpy as np
import pytest

from resetwalk.model import exponential_params


@pytest.fixture
def fig2_params():
    """Drifted two-exponent benchmark set: drift 2, jumps 1, resets 2, gamma 1."""
    return exponential_params(2.0, 1.0, 2.0, 1.0)


@pytest.fixture
def driftless_params():
    return exponential_params(0.0, 1.0, 1.0, 1.0)


@pytest.fixture
def unit_params():
    """All four rates equal to one (heavily used exit-time benchmark)."""
    return exponential_params(1.0, 1.0, 1.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
