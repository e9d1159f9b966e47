import numpy as np
import pytest

from sensefuse import simulate
from sensefuse.experiments import derive_seed

CH_SPEC = simulate.FoldedNormalSpec(target_mean=5.0, std_dev=1.5)
OB_SPEC = simulate.FoldedNormalSpec(target_mean=7.0, std_dev=1.5)


def random_instance(n_nodes: int, seed: int):
    """Heterogeneous instance with the folded-normal SNR statistics used
    throughout the numerical studies (channel mean 5, observation mean 7)."""
    return simulate.generate_instance(n_nodes, CH_SPEC, OB_SPEC, seed)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
