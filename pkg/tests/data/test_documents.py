import json

import numpy as np

from src.data.documents import FitDocument, ParamsDocument, read_params, write_document
from src.model.types import Clustering, FitResult


def test_params_document_roundtrip(tmp_path, noiseless_params):
    path = tmp_path / "params.json"
    write_document(ParamsDocument.from_params(noiseless_params), path)
    labels = json.loads(path.read_text())["labels"]
    assert min(labels[0]) == 1

    restored = read_params(path)
    assert np.array_equal(restored.core, noiseless_params.core)
    assert restored.z.num_clusters == noiseless_params.z.num_clusters
    for mode in range(3):
        assert np.array_equal(restored.z.assignments[mode], noiseless_params.z.assignments[mode])
        assert np.array_equal(restored.theta[mode], noiseless_params.theta[mode])


def test_fit_document_uses_one_based_indices():
    z = Clustering.from_labels([[0, 1, 1], [0, 0, 1]], [2, 2])
    fit = FitResult(
        z_hat=z,
        core_hat=np.ones((2, 2)),
        theta_hat=(np.ones(3), np.ones(3)),
        iterations_run=2,
        trace=[1, 0],
        degenerate_rows=(np.array([2]), np.array([], dtype=np.int64)),
        empty_clusters=(np.array([], dtype=np.int64), np.array([1])),
    )
    document = FitDocument.from_fit(fit, "dtbm_full", "gaussian", 7)
    assert document.ranks == [2, 2]
    assert document.degenerate_rows == [[3], []]
    assert document.empty_clusters == [[], [2]]
    assert document.trace == [1, 0]
