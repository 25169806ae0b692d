import numpy as np

from src.evalmetrics.metrics import misclustering_error
from src.initialize.initializer import WeightedInitializer, init_clustering


def test_noiseless_tensor_is_recovered_exactly(noiseless_params, noiseless_tensor, rng):
    z_hat = init_clustering(noiseless_tensor, [3, 3, 3], "gaussian", rng)
    for mode in range(3):
        ell, _ = misclustering_error(z_hat.assignments[mode], noiseless_params.z.assignments[mode])
        assert ell == 0.0


def test_small_noise_is_recovered_exactly(noiseless_params, noisy_tensor, rng):
    z_hat = init_clustering(noisy_tensor, [3, 3, 3], "gaussian", rng)
    for mode in range(3):
        ell, _ = misclustering_error(z_hat.assignments[mode], noiseless_params.z.assignments[mode])
        assert ell == 0.0


def test_all_zero_tensor_gives_random_valid_labels(rng):
    initializer = WeightedInitializer("gaussian")
    z_hat = initializer.run(np.zeros((5, 6, 7)), [2, 2, 3], rng)
    assert z_hat.dims == (5, 6, 7)
    assert z_hat.num_clusters == (2, 2, 3)
    assert [rows.size for rows in initializer.degenerate_rows] == [5, 6, 7]


def test_same_seed_same_clustering(noisy_tensor):
    first = init_clustering(noisy_tensor, [3, 3, 3], "gaussian", np.random.default_rng(1))
    second = init_clustering(noisy_tensor, [3, 3, 3], "gaussian", np.random.default_rng(1))
    for a, b in zip(first.assignments, second.assignments):
        np.testing.assert_array_equal(a, b)


def test_bernoulli_path_recovers_block_tensor(rng):
    z = np.repeat([0, 1], 5)
    core = np.array([[[0.9, 0.1], [0.1, 0.1]], [[0.1, 0.1], [0.1, 0.9]]])
    mean = core[np.ix_(z, z, z)]
    z_hat = init_clustering(mean, [2, 2, 2], "bernoulli", rng)
    for mode in range(3):
        assert misclustering_error(z_hat.assignments[mode], z)[0] == 0.0


def test_swapping_zero_slices_permutes_labels_identically():
    z = np.array([0, 0, 0, 1, 1, 1])
    core = np.array([[[4.0, 1.0], [1.0, 1.0]], [[1.0, 1.0], [1.0, 4.0]]])
    tensor = core[np.ix_(z, z[:5], z[:5])]
    tensor[[1, 4]] = 0.0
    perm = np.array([0, 4, 2, 3, 1, 5])
    for seed in range(20):
        base = init_clustering(tensor, [2, 2, 2], "gaussian", np.random.default_rng(seed))
        permuted = init_clustering(tensor[perm], [2, 2, 2], "gaussian", np.random.default_rng(seed))
        np.testing.assert_array_equal(permuted.assignments[0], base.assignments[0][perm])
        for mode in (1, 2):
            np.testing.assert_array_equal(permuted.assignments[mode], base.assignments[mode])


def test_zero_rows_share_one_label(rng):
    initializer = WeightedInitializer("gaussian")
    z_hat = initializer.run(np.zeros((5, 6, 7)), [2, 2, 3], rng)
    for labels in z_hat.assignments:
        assert np.unique(labels).size == 1
