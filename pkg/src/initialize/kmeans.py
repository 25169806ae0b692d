from dataclasses import dataclass

import numpy as np
from loguru import logger
from numpy.typing import NDArray
from pydantic import BaseModel, Field
from sklearn.cluster import KMeans


class KMeansOptions(BaseModel):
    restarts: int = Field(default=10, ge=1, description="Independent k-means++ seedings.")
    max_iters: int = Field(default=100, ge=1, description="Lloyd iterations per restart.")
    tol: float = Field(default=1e-6, gt=0, description="Relative convergence tolerance.")


@dataclass(frozen=True)
class WeightedPoints:
    """Points to cluster and their nonnegative weights."""

    points: NDArray[np.float64]
    weights: NDArray[np.float64]

    def __post_init__(self) -> None:
        if self.points.ndim != 2 or self.weights.shape != (self.points.shape[0],):
            logger.error("Need one weight per point")
            raise ValueError("Need one weight per point")
        if not np.all(np.isfinite(self.weights)) or np.any(self.weights < 0):
            logger.error("Weights must be finite and nonnegative")
            raise ValueError("Weights must be finite and nonnegative")


@dataclass(frozen=True)
class KMeansResult:
    labels: NDArray[np.int64]
    centroids: NDArray[np.float64]
    objective: float


def weighted_objective(
    data: WeightedPoints, labels: NDArray[np.int64], centroids: NDArray[np.float64]
) -> float:
    residuals = ((data.points - centroids[labels]) ** 2).sum(axis=1)
    return float(data.weights @ residuals)


def weighted_kmeans(
    data: WeightedPoints,
    num_clusters: int,
    rng: np.random.Generator,
    options: KMeansOptions | None = None,
) -> KMeansResult:
    """Weighted k-means with k-means++ seeding and Lloyd iterations.

    Minimizes ``sum_i w_i ||x_i - c_{z(i)}||^2`` and keeps the best of
    ``options.restarts`` seedings.

    Args:
        data: Points and weights.
        num_clusters: Number of clusters ``r >= 1``.
        rng: Source of the restart seeds.
        options: Restart and convergence settings.

    Returns:
        KMeansResult: Labels, centroids and the weighted objective.

    Raises:
        ValueError: If every weight is zero or ``num_clusters < 1``.
    """
    options = options or KMeansOptions()
    n = data.points.shape[0]
    if num_clusters < 1:
        logger.error(f"Need at least one cluster, got {num_clusters}")
        raise ValueError(f"Need at least one cluster, got {num_clusters}")
    if not np.any(data.weights > 0):
        logger.error("Weighted k-means needs at least one positive weight")
        raise ValueError("Weighted k-means needs at least one positive weight")

    if n <= num_clusters:
        # every point its own centroid
        centroids = np.zeros((num_clusters, data.points.shape[1]))
        centroids[:n] = data.points
        labels = np.arange(n, dtype=np.int64)
        return KMeansResult(labels=labels, centroids=centroids, objective=0.0)

    model = KMeans(
        n_clusters=num_clusters,
        init="k-means++",
        n_init=options.restarts,
        max_iter=options.max_iters,
        tol=options.tol,
        random_state=int(rng.integers(2**31 - 1)),
    )
    model.fit(data.points, sample_weight=data.weights)
    labels = model.labels_.astype(np.int64)
    logger.debug(
        f"Weighted k-means: r={num_clusters}, n={n}, objective={model.inertia_:.6g}, "
        f"iterations={model.n_iter_}"
    )
    return KMeansResult(
        labels=labels,
        centroids=model.cluster_centers_,
        objective=weighted_objective(data, labels, model.cluster_centers_),
    )
