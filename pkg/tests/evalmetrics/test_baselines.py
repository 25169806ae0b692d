import numpy as np

from src.evalmetrics.baselines import hosvd_baseline
from src.evalmetrics.metrics import misclustering_error
from src.model.params import mean_tensor
from src.model.types import Clustering, DtbmParams
from src.simgen.core import assortative_core


def test_hosvd_recovers_blocks_without_degrees(balanced_labels, rng):
    params = DtbmParams(
        z=Clustering.symmetric(balanced_labels, 3, 3),
        core=assortative_core(3, 3, alpha=4.0, s2=1.0),
        theta=(np.ones(balanced_labels.size),) * 3,
        sigma=0.0,
    )
    z_hat = hosvd_baseline(mean_tensor(params), [3, 3, 3], False, rng)
    for mode in range(3):
        assert misclustering_error(z_hat.assignments[mode], balanced_labels, 3)[0] == 0.0


def test_normalized_hosvd_handles_degrees(noiseless_tensor, balanced_labels, rng):
    z_hat = hosvd_baseline(noiseless_tensor, [3, 3, 3], True, rng)
    assert z_hat.num_clusters == (3, 3, 3)
    for mode in range(3):
        assert misclustering_error(z_hat.assignments[mode], balanced_labels, 3)[0] == 0.0
