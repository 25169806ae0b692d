import numpy as np
from loguru import logger
from numpy.typing import NDArray

from src.model.types import Clustering, FitResult
from src.select.theta import estimate_theta
from src.tensor.core import DenseTensor, block_average, matricize, reduced_tensor
from src.tensor.linalg import normalize_rows, zero_rows

from .options import RefineOptions


def assign_by_angle(
    rows: NDArray[np.float64], centroids: NDArray[np.float64], rng: np.random.Generator
) -> tuple[NDArray[np.int64], NDArray[np.int64]]:
    """Assign each row to the centroid with the largest cosine.

    Zero centroids never win; zero rows, and every row when all centroids are
    zero, get a uniformly random label. Ties go to the smallest label.

    Returns:
        tuple: Labels and the indices of randomly assigned rows.
    """
    num_clusters = centroids.shape[0]
    usable = np.linalg.norm(centroids, axis=1) > 0
    cosines = normalize_rows(rows) @ normalize_rows(centroids).T
    cosines[:, ~usable] = -np.inf
    labels = np.argmax(cosines, axis=1).astype(np.int64)

    degenerate = zero_rows(rows) if usable.any() else np.ones(rows.shape[0], dtype=bool)
    labels[degenerate] = rng.integers(num_clusters, size=int(degenerate.sum()))
    return labels, np.flatnonzero(degenerate)


class AngleRefiner:
    """Iterative refinement by maximal cosine between reduced rows and core rows.

    Every sweep computes the block tensor and, for each updated mode, the
    reduced tensor from the same snapshot of the clustering, then reassigns
    all modes at once.
    """

    def __init__(self, options: RefineOptions | None = None) -> None:
        self.options = options or RefineOptions()

    def run(
        self,
        tensor: DenseTensor,
        z0: Clustering,
        rng: np.random.Generator | None = None,
    ) -> FitResult:
        """
        Refine ``z0`` on ``tensor``.

        Args:
            tensor (DenseTensor): Observed tensor.
            z0 (Clustering): Starting clustering, one assignment per mode.
            rng (np.random.Generator | None): Randomness for degenerate rows;
                seeded from ``options.seed`` when omitted.

        Returns:
            FitResult: Final clustering, core, degrees and per-sweep trace.
        """
        if z0.dims != tensor.shape:
            logger.error(f"Clustering dims {z0.dims} do not match tensor shape {tensor.shape}")
            raise ValueError(
                f"Clustering dims {z0.dims} do not match tensor shape {tensor.shape}"
            )
        rng = rng if rng is not None else np.random.default_rng(self.options.seed)
        modes = self.options.update_modes or list(range(tensor.ndim))
        if max(modes) >= tensor.ndim:
            logger.error(f"Update modes {modes} out of range for order {tensor.ndim}")
            raise ValueError(f"Update modes {modes} out of range for order {tensor.ndim}")

        sweeps = self.options.resolve_iterations(max(tensor.shape))
        num_clusters = z0.num_clusters
        assignments = [labels.copy() for labels in z0.assignments]
        degenerate = [np.empty(0, dtype=np.int64) for _ in range(tensor.ndim)]
        previous_core = None
        trace: list[int] = []

        for sweep in range(sweeps):
            blocks = block_average(tensor, assignments, num_clusters)
            core = blocks.values
            if blocks.has_empty and previous_core is not None:
                logger.warning(f"Sweep {sweep}: empty blocks keep their previous core values")
                core = np.where(blocks.empty, previous_core, core)
            previous_core = core

            updated = list(assignments)
            changes = 0
            for mode in modes:
                reduced = reduced_tensor(tensor, assignments, num_clusters, mode).values
                labels, degenerate[mode] = assign_by_angle(
                    matricize(reduced, mode), matricize(core, mode), rng
                )
                changes += int(np.count_nonzero(labels != assignments[mode]))
                updated[mode] = labels
            assignments = updated
            trace.append(changes)
            logger.debug(f"Sweep {sweep}: {changes} assignment changes")
            if changes == 0 and self.options.stop_on_no_change:
                break

        z_hat = Clustering(tuple(assignments), num_clusters)
        return self._result(tensor, z_hat, trace, degenerate)

    @staticmethod
    def _result(
        tensor: DenseTensor,
        z_hat: Clustering,
        trace: list[int],
        degenerate: list[NDArray[np.int64]],
    ) -> FitResult:
        theta = tuple(estimate_theta(tensor, z_hat, mode)[0] for mode in range(tensor.ndim))
        empty = tuple(
            np.flatnonzero(z_hat.sizes(mode) == 0) for mode in range(tensor.ndim)
        )
        if any(e.size for e in empty):
            logger.warning(f"Empty clusters after refinement: {[e.tolist() for e in empty]}")
        return FitResult(
            z_hat=z_hat,
            core_hat=block_average(tensor, z_hat.assignments, z_hat.num_clusters).values,
            theta_hat=theta,
            iterations_run=len(trace),
            trace=trace,
            degenerate_rows=tuple(degenerate),
            empty_clusters=empty,
        )


def angle_refine(
    tensor: DenseTensor,
    z0: Clustering,
    options: RefineOptions | None = None,
    rng: np.random.Generator | None = None,
) -> FitResult:
    return AngleRefiner(options).run(tensor, z0, rng)


def oracle_refine(
    tensor: DenseTensor,
    z_true: Clustering,
    options: RefineOptions | None = None,
    rng: np.random.Generator | None = None,
) -> FitResult:
    """Refinement started from the true clustering."""
    return AngleRefiner(options).run(tensor, z_true, rng)
