from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from loguru import logger
from numpy.typing import NDArray

from src.tensor.core import DenseTensor

Labels = NDArray[np.int64]


@dataclass(frozen=True)
class Clustering:
    """Per-mode cluster assignments ``z_k: [p_k] -> [r_k]``.

    Labels are 0-based. Clusters may be empty; only the label range is
    enforced.
    """

    assignments: tuple[Labels, ...]
    num_clusters: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.assignments) != len(self.num_clusters):
            logger.error("Clustering needs one cluster count per mode")
            raise ValueError("Clustering needs one cluster count per mode")
        for mode, (labels, r) in enumerate(zip(self.assignments, self.num_clusters)):
            if r < 1:
                logger.error(f"Mode {mode} needs at least one cluster, got {r}")
                raise ValueError(f"Mode {mode} needs at least one cluster, got {r}")
            if labels.ndim != 1:
                logger.error(f"Labels for mode {mode} must be a vector")
                raise ValueError(f"Labels for mode {mode} must be a vector")
            if labels.size and (labels.min() < 0 or labels.max() >= r):
                logger.error(f"Labels for mode {mode} outside [0, {r})")
                raise ValueError(f"Labels for mode {mode} outside [0, {r})")

    @classmethod
    def from_labels(
        cls, labels: Sequence[Sequence[int]], num_clusters: Sequence[int] | None = None
    ) -> "Clustering":
        """Build a clustering, inferring ``r_k`` from the largest label if not given."""
        arrays = tuple(np.asarray(z, dtype=np.int64).copy() for z in labels)
        if num_clusters is None:
            num_clusters = [int(z.max()) + 1 if z.size else 1 for z in arrays]
        return cls(assignments=arrays, num_clusters=tuple(int(r) for r in num_clusters))

    @classmethod
    def symmetric(cls, labels: Sequence[int], num_clusters: int, order: int) -> "Clustering":
        return cls.from_labels([labels] * order, [num_clusters] * order)

    @property
    def order(self) -> int:
        return len(self.assignments)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(z.size for z in self.assignments)

    def sizes(self, mode: int) -> NDArray[np.int64]:
        return np.bincount(self.assignments[mode], minlength=self.num_clusters[mode])

    def membership(self, mode: int, weights: NDArray[np.float64] | None = None) -> NDArray:
        """``p_k x r_k`` membership matrix, optionally scaled row-wise by ``weights``."""
        labels = self.assignments[mode]
        matrix = np.zeros((labels.size, self.num_clusters[mode]))
        values = np.ones(labels.size) if weights is None else weights
        matrix[np.arange(labels.size), labels] = values
        return matrix

    def relabel(self, mode: int, permutation: Sequence[int]) -> "Clustering":
        """Return a copy with mode ``mode`` relabelled by ``a -> permutation[a]``."""
        assignments = list(self.assignments)
        assignments[mode] = np.asarray(permutation, dtype=np.int64)[assignments[mode]]
        return Clustering(tuple(assignments), self.num_clusters)


@dataclass(frozen=True)
class DtbmParams:
    """Parameters ``(z, S, theta)`` of a degree-corrected tensor block model.

    Attributes:
        z: Per-mode clustering.
        core: Core tensor of shape ``(r_1, ..., r_K)``.
        theta: Per-mode degree vectors of length ``p_k``.
        sigma: Noise scale; 0 for noiseless data.
    """

    z: Clustering
    core: DenseTensor
    theta: tuple[NDArray[np.float64], ...]
    sigma: float = 1.0

    def __post_init__(self) -> None:
        if self.core.shape != self.z.num_clusters:
            logger.error(
                f"Core shape {self.core.shape} does not match cluster counts "
                f"{self.z.num_clusters}"
            )
            raise ValueError(
                f"Core shape {self.core.shape} does not match cluster counts "
                f"{self.z.num_clusters}"
            )
        if tuple(t.size for t in self.theta) != self.z.dims:
            logger.error("Degree vectors must match the clustering dimensions")
            raise ValueError("Degree vectors must match the clustering dimensions")
        if self.sigma < 0:
            logger.error(f"Noise scale must be nonnegative, got {self.sigma}")
            raise ValueError(f"Noise scale must be nonnegative, got {self.sigma}")

    @property
    def order(self) -> int:
        return self.z.order

    @property
    def dims(self) -> tuple[int, ...]:
        return self.z.dims


@dataclass
class FitResult:
    """Output of a clustering method.

    Attributes:
        z_hat: Estimated clustering.
        core_hat: Block averages of the data under ``z_hat``.
        theta_hat: Per-mode degree estimates, summing to one within each cluster.
        iterations_run: Number of refinement sweeps performed.
        trace: Assignment changes (summed over modes) per sweep.
        degenerate_rows: Per mode, indices assigned at random in the last step.
        empty_clusters: Per mode, clusters left without members.
        operation_counts: Leading-order operation counts of the fit.
    """

    z_hat: Clustering
    core_hat: DenseTensor
    theta_hat: tuple[NDArray[np.float64], ...]
    iterations_run: int = 0
    trace: list[int] = field(default_factory=list)
    degenerate_rows: tuple[NDArray[np.int64], ...] = ()
    empty_clusters: tuple[NDArray[np.int64], ...] = ()
    operation_counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.trace) != self.iterations_run:
            logger.error("Trace length must equal the number of iterations run")
            raise ValueError("Trace length must equal the number of iterations run")
