import numpy as np
import pytest

from src.initialize.factory import DenoiserFactory
from src.initialize.impl.double_projection import double_projection_denoise
from src.initialize.impl.square_unfolding import bernoulli_denoise
from src.tensor.core import matricize, multilinear_multiply, square_unfold


def low_rank_tensor(rng, dims, ranks):
    core = rng.standard_normal(ranks)
    factors = [(rng.standard_normal((p, r)), k) for k, (p, r) in enumerate(zip(dims, ranks))]
    return multilinear_multiply(core, factors)


def test_double_projection_keeps_low_rank_tensor(rng):
    tensor = low_rank_tensor(rng, (8, 9, 10), (2, 3, 2))
    np.testing.assert_allclose(double_projection_denoise(tensor, [2, 3, 2]), tensor, atol=1e-9)


def test_double_projection_recovers_noiseless_mean(noiseless_tensor):
    denoised = double_projection_denoise(noiseless_tensor, [3, 3, 3])
    assert np.linalg.norm(denoised - noiseless_tensor) <= 1e-9


def test_double_projection_output_has_multilinear_rank(rng):
    denoised = double_projection_denoise(rng.standard_normal((6, 7, 8)), [2, 2, 3])
    for mode, rank in enumerate([2, 2, 3]):
        values = np.linalg.svd(matricize(denoised, mode), compute_uv=False)
        assert np.all(values[rank:] <= 1e-8 * values[0])


def test_double_projection_rejects_bad_ranks(rng):
    with pytest.raises(ValueError):
        double_projection_denoise(rng.standard_normal((4, 4)), [5, 2])
    with pytest.raises(ValueError):
        double_projection_denoise(rng.standard_normal((4, 4)), [2])


def test_bernoulli_denoise_truncates_square_unfolding(rng):
    denoised = bernoulli_denoise(rng.uniform(size=(5, 5, 5)), [2, 2, 2])
    values = np.linalg.svd(square_unfold(denoised), compute_uv=False)
    assert np.all(values[4:] <= 1e-8 * values[0])


def test_bernoulli_denoise_matrix_case_is_rank_r(rng):
    matrix = rng.uniform(size=(6, 6))
    denoised = bernoulli_denoise(matrix, [2, 2])
    left, values, right = np.linalg.svd(matrix)
    np.testing.assert_allclose(denoised, (left[:, :2] * values[:2]) @ right[:2], atol=1e-10)


def test_bernoulli_denoise_keeps_block_structured_tensor():
    z = np.array([0, 1, 0, 1])
    core = np.array([[[1.0, 0.0], [0.0, 1.0]], [[0.0, 1.0], [1.0, 0.0]]])
    tensor = core[np.ix_(z, z, z)]
    np.testing.assert_allclose(bernoulli_denoise(tensor, [2, 2, 2]), tensor, atol=1e-10)


def test_bernoulli_denoise_needs_cubical_tensor(rng):
    with pytest.raises(ValueError):
        bernoulli_denoise(rng.uniform(size=(4, 5, 4)), [2, 2, 2])


def test_factory_knows_both_observation_models():
    assert DenoiserFactory.get_registered_types() == ["gaussian", "bernoulli"]
    with pytest.raises(ValueError):
        DenoiserFactory.create("poisson")
