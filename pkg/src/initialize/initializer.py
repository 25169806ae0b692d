from typing import Sequence

import numpy as np
from loguru import logger
from numpy.typing import NDArray

from src.model.types import Clustering
from src.tensor.core import DenseTensor, matricize
from src.tensor.linalg import zero_rows

from .base import check_ranks
from .factory import DenoiserFactory
from .kmeans import KMeansOptions, WeightedPoints, weighted_kmeans


class WeightedInitializer:
    """Spectral initialization followed by weighted spherical k-means.

    Attributes:
        denoised (DenseTensor): Mean-tensor estimate from the last run.
        degenerate_rows (tuple): Per mode, indices of zero rows; they share one random label.
    """

    def __init__(self, observation: str = "gaussian", kmeans: KMeansOptions | None = None):
        self.observation = observation
        self._denoiser = DenoiserFactory.create(observation)
        self._kmeans = kmeans or KMeansOptions()

        self.denoised: DenseTensor
        self.degenerate_rows: tuple[NDArray[np.int64], ...] = ()

    def run(
        self, tensor: DenseTensor, ranks: Sequence[int], rng: np.random.Generator
    ) -> Clustering:
        """
        Estimate an initial clustering for every mode.

        Args:
            tensor (DenseTensor): Observed tensor.
            ranks (Sequence[int]): Cluster number per mode.
            rng (np.random.Generator): Randomness for degenerate rows and k-means seeds.

        Returns:
            Clustering: Initial per-mode assignments.
        """
        ranks = check_ranks(tensor, ranks)
        logger.info(f"Denoising tensor of shape {tensor.shape} ({self.observation})...")
        self.denoised = self._denoiser.denoise(tensor, ranks)
        logger.info("Denoising completed.")

        mode_rngs = rng.spawn(tensor.ndim)
        labels, degenerate = [], []
        for mode in range(tensor.ndim):
            mode_labels, mode_degenerate = self._cluster_mode(
                matricize(self.denoised, mode), ranks[mode], mode_rngs[mode]
            )
            labels.append(mode_labels)
            degenerate.append(mode_degenerate)
        self.degenerate_rows = tuple(degenerate)
        return Clustering.from_labels(labels, ranks)

    def _cluster_mode(
        self, rows: NDArray[np.float64], num_clusters: int, rng: np.random.Generator
    ) -> tuple[NDArray[np.int64], NDArray[np.int64]]:
        norms = np.linalg.norm(rows, axis=1)
        degenerate = zero_rows(rows)
        labels = np.zeros(rows.shape[0], dtype=np.int64)
        zero_rng, kmeans_rng = rng.spawn(2)
        if degenerate.any():
            # zero rows are indistinguishable; one shared draw keeps slice permutations equivariant
            labels[degenerate] = zero_rng.integers(num_clusters)
            logger.debug(f"{int(degenerate.sum())} zero rows share a random label")

        active = ~degenerate
        if active.any():
            points = WeightedPoints(
                points=rows[active] / norms[active, None], weights=norms[active] ** 2
            )
            result = weighted_kmeans(points, num_clusters, kmeans_rng, self._kmeans)
            labels[active] = result.labels
        return labels, np.flatnonzero(degenerate)


def init_clustering(
    tensor: DenseTensor,
    ranks: Sequence[int],
    observation: str,
    rng: np.random.Generator,
    kmeans: KMeansOptions | None = None,
) -> Clustering:
    return WeightedInitializer(observation, kmeans).run(tensor, ranks, rng)
