"""Monte-Carlo reproduction checks; run with ``pytest -m slow``."""

import math
from itertools import permutations

import numpy as np
import pytest

from src.config import ExperimentConfig, SimSpec
from src.evalmetrics.metrics import cer, misclustering_error
from src.experiments.sweep import SweepPipeline
from src.initialize.factory import DenoiserFactory
from src.initialize.initializer import init_clustering
from src.model.params import mean_tensor
from src.refine.angle import angle_refine
from src.select.bic import select_r
from src.simgen.sampler import sample_observation

pytestmark = pytest.mark.slow

FULL_GRID = dict(p=[80], K=[3], r=[5], replicates=30)
# Squared angle gap shared by the BIC regimes, so the noise level changes the SNR.
BIC_GAP = 3.47e-4


def fixed_gap_gamma(p: int, sigma: float) -> float:
    return math.log(BIC_GAP / sigma**2, p)


def test_noiseless_instances_are_recovered_exactly():
    for seed in range(100):
        spec = SimSpec(p=30, K=3, r=3, gamma=-0.5, sigma=0.0, seed=seed)
        simulation = sample_observation(spec)
        rng = np.random.default_rng(seed)
        z0 = init_clustering(simulation.tensor, [3, 3, 3], "gaussian", rng)
        fit = angle_refine(simulation.tensor, z0, rng=rng)
        truth = simulation.params.z
        for mode in range(3):
            assert misclustering_error(fit.z_hat.assignments[mode], truth.assignments[mode], 3)[0] == 0.0


def cer_by_gamma(config: ExperimentConfig, *methods: str) -> list[dict]:
    """Mean CER per signal exponent for each of ``methods``, from one sweep."""
    pipeline = SweepPipeline(config)
    pipeline.run()
    table = pipeline.aggregate
    curves = []
    for method in methods:
        rows = table[table["method"] == method]
        curves.append(dict(zip(rows["gamma"], rows["cer_mean"])))
    return curves


def test_refinement_improves_on_initialization(tmp_path):
    config = ExperimentConfig(
        **FULL_GRID, methods=["dtbm_init", "dtbm_full"], output=tmp_path / "sweep.csv"
    )
    full, init = cer_by_gamma(config, "dtbm_full", "dtbm_init")
    for gamma in config.gamma_values():
        assert full[gamma] <= init[gamma]
    assert full[-1.4] <= 0.05


def test_gap_between_oracle_and_polynomial_estimator(tmp_path):
    config = ExperimentConfig(
        **FULL_GRID, methods=["dtbm_full", "oracle"], output=tmp_path / "order3.csv"
    )
    full, oracle = cer_by_gamma(config, "dtbm_full", "oracle")
    window = [g for g in config.gamma_values() if -2.0 <= g <= -1.6]
    assert any(oracle[g] + 0.1 <= full[g] for g in window)

    matrix = config.model_copy(
        update={"K": [2], "gamma": [-1.2, -1.0, -0.8, -0.6, -0.4], "output": tmp_path / "order2.csv"}
    )
    full, oracle = cer_by_gamma(matrix, "dtbm_full", "oracle")
    for gamma in matrix.gamma_values():
        assert abs(full[gamma] - oracle[gamma]) <= 0.08


@pytest.mark.parametrize("p, sigma, r, low, high", [(80, 0.5, 2, 1.9, 2.1), (80, 0.5, 4, 3.9, 4.1)])
def test_bic_recovers_cluster_number(p, sigma, r, low, high):
    selected = []
    for seed in range(30):
        spec = SimSpec(p=p, K=3, r=r, gamma=fixed_gap_gamma(p, sigma), sigma=sigma, seed=seed)
        tensor = sample_observation(spec).tensor
        r_hat, _ = select_r(tensor, range(1, 7), np.random.default_rng(seed))
        selected.append(r_hat)
    assert low <= np.mean(selected) <= high
    assert np.std(selected) <= 0.2


def test_bic_underestimates_at_high_noise():
    selected = []
    for seed in range(30):
        spec = SimSpec(p=50, K=3, r=4, gamma=fixed_gap_gamma(50, 1.0), sigma=1.0, seed=seed)
        tensor = sample_observation(spec).tensor
        r_hat, _ = select_r(tensor, range(1, 7), np.random.default_rng(seed))
        selected.append(r_hat)
    assert 2.6 <= np.mean(selected) <= 3.6


def test_degree_heterogeneity_hurts_plain_hosvd(tmp_path):
    config = ExperimentConfig(
        p=[100],
        r=[5],
        gamma=[-1.2],
        degree_family=["pareto"],
        shape=[3.0, 6.0],
        replicates=30,
        methods=["dtbm_full", "hosvd"],
        output=tmp_path / "degrees.csv",
    )
    pipeline = SweepPipeline(config)
    pipeline.run()
    table = pipeline.aggregate.set_index(["shape", "method"])["cer_mean"]
    for shape in (3.0, 6.0):
        assert table[(shape, "dtbm_full")] <= table[(shape, "hosvd")]
    assert table[(3.0, "hosvd")] >= table[(6.0, "hosvd")]


@pytest.mark.xfail(
    reason="degree products force Bernoulli cores small enough that gamma=-1.4 sits below the transition",
    strict=False,
)
def test_bernoulli_observations(tmp_path):
    config = ExperimentConfig(
        **FULL_GRID,
        gamma=[-1.4],
        observation=["bernoulli"],
        methods=["dtbm_full"],
        output=tmp_path / "bernoulli.csv",
    )
    pipeline = SweepPipeline(config)
    pipeline.run()
    assert pipeline.aggregate["cer_mean"].iloc[0] <= 0.10


def test_gaussian_denoiser_error_bound():
    p, r = 40, 3
    scale = p**1.5 * r + p * r**2 + r**3
    denoiser = DenoiserFactory.create("gaussian")
    for seed in range(30):
        simulation = sample_observation(SimSpec(p=p, K=3, r=r, sigma=1.0, seed=seed))
        estimate = denoiser.denoise(simulation.tensor, [r, r, r])
        error = np.sum((estimate - mean_tensor(simulation.params)) ** 2)
        assert error / scale <= 10


def test_metric_oracles(rng):
    for _ in range(500):
        p, r = int(rng.integers(2, 13)), int(rng.integers(1, 5))
        z, z_hat = rng.integers(r, size=p), rng.integers(r, size=p)
        pairs = [(i, j) for i in range(p) for j in range(i + 1, p)]
        disagreements = sum((z[i] == z[j]) != (z_hat[i] == z_hat[j]) for i, j in pairs)
        assert cer(z_hat, z) == pytest.approx(disagreements / len(pairs), abs=1e-15)
        matches = max(sum(int(z_hat[i] == perm[z[i]]) for i in range(p)) for perm in permutations(range(r)))
        assert misclustering_error(z_hat, z, r)[0] == pytest.approx(1 - matches / p)
