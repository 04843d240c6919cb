import numpy as np
import pytest

from brightdark import HilbertConfig, StateVector


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_state(config: HilbertConfig, rng, max_total: int | None = None) -> StateVector:
    """Random normalized state, optionally restricted to photon sectors
    with total occupation <= max_total (to stay clear of the cutoff edge)."""
    amps = rng.standard_normal(config.dim) + 1j * rng.standard_normal(config.dim)
    if max_total is not None:
        idx = np.arange(config.dim)
        total = sum(config.occupation_of(idx, j) for j in range(config.mode_count))
        amps[total > max_total] = 0.0
    return StateVector(config, amps / np.linalg.norm(amps))
