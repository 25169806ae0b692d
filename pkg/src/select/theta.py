import numpy as np
from loguru import logger
from numpy.typing import NDArray

from src.model.types import Clustering
from src.tensor.core import DenseTensor, matricize, reduced_tensor


def estimate_theta(
    tensor: DenseTensor, z: Clustering, mode: int
) -> tuple[NDArray[np.float64], NDArray[np.int64]]:
    """Degree estimate from the row norms of the reduced tensor.

    ``theta(i)`` is the norm of row ``i`` of the mode-``mode`` reduced tensor
    divided by the sum of those norms over the cluster of ``i``, so the
    estimates sum to one within each cluster.

    Args:
        tensor: Observed tensor.
        z: Clustering of every mode.
        mode: Mode whose degrees are estimated.

    Returns:
        tuple: The degree vector and the clusters whose rows were all zero
            (those get uniform degrees).
    """
    reduced = reduced_tensor(tensor, z.assignments, z.num_clusters, mode).values
    norms = np.linalg.norm(matricize(reduced, mode), axis=1)
    labels = z.assignments[mode]
    r = z.num_clusters[mode]
    totals = np.bincount(labels, weights=norms, minlength=r)
    sizes = np.bincount(labels, minlength=r)

    flat = (totals <= 0) & (sizes > 0)
    if flat.any():
        logger.warning(f"Mode {mode}: clusters {np.flatnonzero(flat).tolist()} have zero rows only")
    theta = np.where(
        flat[labels],
        1.0 / np.maximum(sizes[labels], 1),
        norms / np.where(totals[labels] > 0, totals[labels], 1.0),
    )
    return theta, np.flatnonzero(flat)


def rescale_to_sizes(theta: NDArray[np.float64], z: Clustering, mode: int) -> NDArray[np.float64]:
    """Rescale degrees so each cluster's degrees sum to the cluster size."""
    labels = z.assignments[mode]
    sizes = z.sizes(mode)
    totals = np.bincount(labels, weights=theta, minlength=z.num_clusters[mode])
    scale = np.where(totals > 0, sizes / np.where(totals > 0, totals, 1.0), 0.0)
    return theta * scale[labels]
