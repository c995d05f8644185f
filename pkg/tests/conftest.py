import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20250810)


@pytest.fixture
def step_image():
    """Clean vertical step: dark left half, bright right half."""
    img = np.zeros((40, 60))
    img[:, 30:] = 1.0
    return img
