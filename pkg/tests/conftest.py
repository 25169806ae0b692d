import numpy as np
import pytest

from src.model.params import mean_tensor
from src.model.types import Clustering, DtbmParams
from src.simgen.core import assortative_core
from src.simgen.degrees.impl.families import AbsNormalDegrees
from src.simgen.sampler import sample_theta

NUM_NODES = 12
NUM_CLUSTERS = 3
ORDER = 3


@pytest.fixture
def rng() -> np.random.Generator:
    """Fixture providing a seeded generator."""
    return np.random.default_rng(2024)


@pytest.fixture
def balanced_labels() -> np.ndarray:
    return np.tile(np.arange(NUM_CLUSTERS), NUM_NODES // NUM_CLUSTERS)


@pytest.fixture
def noiseless_params(balanced_labels) -> DtbmParams:
    """Symmetric dTBM with a well-separated core and heterogeneous degrees."""
    degree_rng = np.random.default_rng(7)
    theta = sample_theta(balanced_labels, NUM_CLUSTERS, AbsNormalDegrees(), degree_rng)
    return DtbmParams(
        z=Clustering.symmetric(balanced_labels, NUM_CLUSTERS, ORDER),
        core=assortative_core(NUM_CLUSTERS, ORDER, alpha=4.0, s2=1.0),
        theta=(theta,) * ORDER,
        sigma=0.0,
    )


@pytest.fixture
def noiseless_tensor(noiseless_params) -> np.ndarray:
    return mean_tensor(noiseless_params)


@pytest.fixture
def noisy_tensor(noiseless_params) -> np.ndarray:
    """Noiseless fixture plus small Gaussian noise."""
    mean = mean_tensor(noiseless_params)
    return mean + 0.01 * np.random.default_rng(11).standard_normal(mean.shape)


@pytest.fixture
def mixed_sign_params() -> DtbmParams:
    """One block with degrees (1, 1, -1, -1)."""
    theta = np.array([1.0, 1.0, -1.0, -1.0])
    return DtbmParams(
        z=Clustering.symmetric(np.zeros(4, dtype=np.int64), 1, 3),
        core=np.ones((1, 1, 1)),
        theta=(theta,) * 3,
    )


@pytest.fixture
def two_block_params() -> DtbmParams:
    """Two blocks with unit degrees describing the same tensor as ``mixed_sign_params``."""
    signs = np.array([1.0, -1.0])
    return DtbmParams(
        z=Clustering.symmetric(np.array([0, 0, 1, 1]), 2, 3),
        core=np.einsum("a,b,c->abc", signs, signs, signs),
        theta=(np.ones(4),) * 3,
    )
