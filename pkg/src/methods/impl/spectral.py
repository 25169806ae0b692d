from typing import Sequence

import numpy as np

from src.evalmetrics.baselines import hosvd_baseline
from src.model.types import Clustering, FitResult
from src.pipeline import initial_fit
from src.tensor.core import DenseTensor

from ..base import ClusteringMethod


class Hosvd(ClusteringMethod):
    """k-means on the HOSVD factor rows, ignoring degree heterogeneity."""

    normalized = False

    def fit(
        self,
        tensor: DenseTensor,
        ranks: Sequence[int],
        rng: np.random.Generator,
        truth: Clustering | None = None,
    ) -> FitResult:
        z = hosvd_baseline(tensor, ranks, self.normalized, rng, self.kmeans)
        return initial_fit(tensor, z)


class HosvdPlus(Hosvd):
    """HOSVD with l2-normalized factor rows."""

    normalized = True
