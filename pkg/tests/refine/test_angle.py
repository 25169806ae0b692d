import numpy as np
import pytest

from src.evalmetrics.metrics import misclustering_error
from src.model.types import Clustering
from src.refine.angle import AngleRefiner, angle_refine, assign_by_angle, oracle_refine
from src.refine.options import RefineOptions
from src.tensor.core import matricize, reduced_tensor


def perturb(z: Clustering, fraction: float, rng: np.random.Generator) -> Clustering:
    labels = []
    for assignment, r in zip(z.assignments, z.num_clusters):
        noisy = assignment.copy()
        flip = rng.choice(noisy.size, int(fraction * noisy.size), replace=False)
        noisy[flip] = (noisy[flip] + 1) % r
        labels.append(noisy)
    return Clustering.from_labels(labels, z.num_clusters)


def test_truth_is_a_fixed_point(noiseless_params, noiseless_tensor):
    fit = oracle_refine(noiseless_tensor, noiseless_params.z)
    assert fit.trace == [0]
    assert fit.iterations_run == 1
    for a, b in zip(fit.z_hat.assignments, noiseless_params.z.assignments):
        np.testing.assert_array_equal(a, b)


def test_refinement_repairs_a_perturbed_start(noiseless_params, noisy_tensor, rng):
    start = perturb(noiseless_params.z, 0.2, rng)
    fit = angle_refine(noisy_tensor, start, rng=rng)
    for mode in range(3):
        ell, _ = misclustering_error(fit.z_hat.assignments[mode], noiseless_params.z.assignments[mode])
        assert ell == 0.0
    assert len(fit.trace) == fit.iterations_run
    assert fit.trace[-1] == 0


def test_scaling_the_data_does_not_change_the_trace(noiseless_params, noisy_tensor):
    start = perturb(noiseless_params.z, 0.2, np.random.default_rng(3))
    first = angle_refine(noisy_tensor, start, rng=np.random.default_rng(0))
    second = angle_refine(5.0 * noisy_tensor, start, rng=np.random.default_rng(0))
    assert first.trace == second.trace
    for a, b in zip(first.z_hat.assignments, second.z_hat.assignments):
        np.testing.assert_array_equal(a, b)


def test_relabelled_start_gives_relabelled_output(noiseless_params, noisy_tensor):
    start = perturb(noiseless_params.z, 0.2, np.random.default_rng(3))
    permutation = [1, 2, 0]
    relabelled = start
    for mode in range(3):
        relabelled = relabelled.relabel(mode, permutation)
    first = angle_refine(noisy_tensor, start, rng=np.random.default_rng(0))
    second = angle_refine(noisy_tensor, relabelled, rng=np.random.default_rng(0))
    for a, b in zip(first.z_hat.assignments, second.z_hat.assignments):
        np.testing.assert_array_equal(np.asarray(permutation)[a], b)


def test_fixed_iteration_count_without_early_stop(noiseless_params, noiseless_tensor):
    options = RefineOptions(max_iters=3, stop_on_no_change=False)
    fit = oracle_refine(noiseless_tensor, noiseless_params.z, options)
    assert fit.trace == [0, 0, 0]


def test_default_iteration_count():
    assert RefineOptions().resolve_iterations(80) == 10
    assert RefineOptions().resolve_iterations(5000) == 13
    assert RefineOptions(max_iters=4).resolve_iterations(5000) == 4


def test_update_modes_restricts_refinement(noiseless_params, noiseless_tensor, rng):
    start = perturb(noiseless_params.z, 0.25, rng)
    options = RefineOptions(update_modes=[0], max_iters=1)
    fit = AngleRefiner(options).run(noiseless_tensor, start, rng)
    np.testing.assert_array_equal(fit.z_hat.assignments[1], start.assignments[1])
    np.testing.assert_array_equal(fit.z_hat.assignments[2], start.assignments[2])


def test_theta_estimates_sum_to_one_per_cluster(noiseless_params, noisy_tensor):
    fit = oracle_refine(noisy_tensor, noiseless_params.z)
    for mode in range(3):
        sums = np.bincount(fit.z_hat.assignments[mode], weights=fit.theta_hat[mode])
        np.testing.assert_allclose(sums, 1.0, atol=1e-10)


def test_mismatched_start_raises(noiseless_tensor):
    with pytest.raises(ValueError):
        angle_refine(noiseless_tensor, Clustering.from_labels([[0, 1]] * 3))


def test_assign_by_angle_matches_per_point_scan(rng):
    rows = rng.standard_normal((20, 4))
    centroids = rng.standard_normal((3, 4))
    labels, degenerate = assign_by_angle(rows, centroids, rng)
    assert degenerate.size == 0
    for row, label in zip(rows, labels):
        cosines = [row @ c / np.linalg.norm(row) / np.linalg.norm(c) for c in centroids]
        assert label == int(np.argmax(cosines))


def test_zero_rows_and_zero_centroids(rng):
    rows = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]])
    centroids = np.array([[0.0, 0.0], [0.0, 2.0], [3.0, 0.0]])
    labels, degenerate = assign_by_angle(rows, centroids, rng)
    assert labels[0] == 2 and labels[2] == 1
    np.testing.assert_array_equal(degenerate, [1])

    labels, degenerate = assign_by_angle(rows, np.zeros((2, 2)), rng)
    assert degenerate.size == 3
    assert set(labels) <= {0, 1}


def test_single_mode_assignment_by_sign():
    # order-1 data: cosine between scalars is their sign agreement
    tensor = np.array([2.0, -1.0, 3.0, -0.5])
    start = Clustering.from_labels([[0, 1, 0, 0]], [2])
    fit = angle_refine(tensor, start, rng=np.random.default_rng(0))
    labels = fit.z_hat.assignments[0]
    assert labels[0] == labels[2]
    assert labels[1] == labels[3]
    assert labels[0] != labels[1]


def test_positive_degree_does_not_move_a_row(noiseless_params, noiseless_tensor, rng):
    z = noiseless_params.z
    core_rows = matricize(noiseless_params.core, 0)
    rows = matricize(reduced_tensor(noiseless_tensor, z.assignments, z.num_clusters, 0).values, 0)
    labels, _ = assign_by_angle(rows, core_rows, rng)
    for scale in (0.1, 3.0, 250.0):
        scaled = noiseless_tensor.copy()
        scaled[5] *= scale
        reduced = reduced_tensor(scaled, z.assignments, z.num_clusters, 0).values
        rescaled_labels, _ = assign_by_angle(matricize(reduced, 0), core_rows, rng)
        np.testing.assert_array_equal(rescaled_labels, labels)
