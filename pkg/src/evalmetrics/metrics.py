from dataclasses import dataclass
from itertools import permutations

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import linear_sum_assignment
from sklearn.metrics import rand_score

# Largest label count solved by enumerating every permutation.
ENUMERATION_LIMIT = 8


@dataclass(frozen=True)
class MetricReport:
    """Accuracy of an estimated clustering against the truth.

    Attributes:
        ell: Fraction of misclustered nodes under the best relabelling.
        cer: One minus the Rand index.
        best_permutation: ``best_permutation[a]`` is the estimated label matched
            to true label ``a``.
    """

    ell: float
    cer: float
    best_permutation: tuple[int, ...]


def _as_labels(z_hat: ArrayLike, z: ArrayLike) -> tuple[NDArray[np.int64], NDArray[np.int64]]:
    z_hat = np.asarray(z_hat, dtype=np.int64)
    z = np.asarray(z, dtype=np.int64)
    if z_hat.shape != z.shape or z.ndim != 1:
        logger.error(f"Clusterings must be vectors of equal length, got {z_hat.shape} and {z.shape}")
        raise ValueError(
            f"Clusterings must be vectors of equal length, got {z_hat.shape} and {z.shape}"
        )
    return z_hat, z


def agreement_matrix(z_hat: NDArray, z: NDArray, num_labels: int) -> NDArray[np.int64]:
    """``C[a, b]`` counts nodes with true label ``a`` and estimated label ``b``."""
    counts = np.zeros((num_labels, num_labels), dtype=np.int64)
    np.add.at(counts, (z, z_hat), 1)
    return counts


def misclustering_error(
    z_hat: ArrayLike, z: ArrayLike, num_clusters: int | None = None
) -> tuple[float, tuple[int, ...]]:
    """Misclustering error minimized over label permutations.

    Label sets of different sizes are padded with unused labels. Up to
    ``ENUMERATION_LIMIT`` labels every permutation is enumerated; beyond that
    the optimal assignment on the agreement matrix is used.

    Args:
        z_hat: Estimated labels (0-based).
        z: True labels (0-based).
        num_clusters: Number of labels; inferred from the data when omitted.

    Returns:
        tuple: ``(ell, permutation)`` with ``z_hat(i) == permutation[z(i)]`` for
            every correctly clustered node.
    """
    z_hat, z = _as_labels(z_hat, z)
    if z.size == 0:
        return 0.0, ()
    num_labels = max(int(z_hat.max()) + 1, int(z.max()) + 1, num_clusters or 0)
    counts = agreement_matrix(z_hat, z, num_labels)

    if num_labels <= ENUMERATION_LIMIT:
        candidates = np.array(list(permutations(range(num_labels))))
        agreements = counts[np.arange(num_labels), candidates].sum(axis=1)
        best = candidates[int(np.argmax(agreements))]
    else:
        rows, best = linear_sum_assignment(counts, maximize=True)
        best = best[np.argsort(rows)]
    matched = int(counts[np.arange(num_labels), best].sum())
    return 1.0 - matched / z.size, tuple(int(b) for b in best)


def cer(z_hat: ArrayLike, z: ArrayLike) -> float:
    """Clustering error rate, one minus the Rand index over unordered pairs."""
    z_hat, z = _as_labels(z_hat, z)
    if z.size < 2:
        return 0.0
    return float(1.0 - rand_score(z, z_hat))


def evaluate(z_hat: ArrayLike, z: ArrayLike, num_clusters: int | None = None) -> MetricReport:
    ell, permutation = misclustering_error(z_hat, z, num_clusters)
    return MetricReport(ell=ell, cer=cer(z_hat, z), best_permutation=permutation)


def stability_diagnostic(
    z_bar: ArrayLike, theta: ArrayLike, num_clusters: int | None = None
) -> float:
    """Sine of the angle between raw and degree-weighted cluster sizes.

    Args:
        z_bar: Clustering to assess.
        theta: Degree vector.
        num_clusters: Number of labels; inferred when omitted.

    Returns:
        float: ``sin(p(z_bar), p_theta(z_bar))`` in ``[0, 1]``.

    Raises:
        ValueError: If either size vector is zero.
    """
    z_bar = np.asarray(z_bar, dtype=np.int64)
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape != z_bar.shape:
        logger.error("Degree vector must match the clustering length")
        raise ValueError("Degree vector must match the clustering length")
    r = num_clusters or (int(z_bar.max()) + 1 if z_bar.size else 1)
    sizes = np.bincount(z_bar, minlength=r).astype(np.float64)
    weighted = np.bincount(z_bar, weights=theta, minlength=r)
    size_norm2 = sizes @ sizes
    if size_norm2 == 0 or not weighted.any():
        logger.error("Stability diagnostic undefined for a zero size vector")
        raise ValueError("Stability diagnostic undefined for a zero size vector")
    # residual of weighted sizes after projecting on raw sizes
    residual = weighted - (sizes @ weighted / size_norm2) * sizes
    return float(min(1.0, np.linalg.norm(residual) / np.linalg.norm(weighted)))
