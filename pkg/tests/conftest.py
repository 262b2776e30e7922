import numpy as np
import pytest

from lvfronts import ModelParams, solve_bistable_wave, solve_perturbed_wave

REFERENCE = ModelParams(d=1, r=1, a=2, b=3)


@pytest.fixture(scope="session")
def ref_wave():
    """Bistable front at the reference parameters (d=r=1, a=2, b=3)."""
    return solve_bistable_wave(REFERENCE)


@pytest.fixture(scope="session")
def ref_perturbed_wave():
    """Habitat-perturbed front (eps = 0.05) at the reference parameters."""
    return solve_perturbed_wave(REFERENCE, eps=0.05)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20260826)
