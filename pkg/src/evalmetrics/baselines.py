from typing import Sequence

import numpy as np
from loguru import logger

from src.initialize.base import check_ranks
from src.initialize.kmeans import KMeansOptions, WeightedPoints, weighted_kmeans
from src.model.types import Clustering
from src.tensor.core import DenseTensor, matricize
from src.tensor.linalg import normalize_rows, top_left_singular_vectors


def hosvd_baseline(
    tensor: DenseTensor,
    ranks: Sequence[int],
    normalized: bool,
    rng: np.random.Generator,
    kmeans: KMeansOptions | None = None,
) -> Clustering:
    """Single-projection HOSVD followed by k-means on the factor rows.

    With ``normalized`` the factor rows are scaled to unit norm first, which
    gives the degree-aware variant.
    """
    ranks = check_ranks(tensor, ranks)
    labels = []
    for mode, mode_rng in enumerate(rng.spawn(tensor.ndim)):
        unfolded = matricize(tensor, mode)
        rank = min(ranks[mode], *unfolded.shape)
        factor = top_left_singular_vectors(unfolded, rank).left_vectors
        if normalized:
            factor = normalize_rows(factor)
        points = WeightedPoints(points=factor, weights=np.ones(factor.shape[0]))
        labels.append(weighted_kmeans(points, ranks[mode], mode_rng, kmeans).labels)
    logger.debug(f"HOSVD baseline (normalized={normalized}) finished for ranks {ranks}")
    return Clustering.from_labels(labels, ranks)
