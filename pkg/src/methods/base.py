from abc import ABC, abstractmethod
from typing import Sequence

import numpy as np

from src.initialize.kmeans import KMeansOptions
from src.model.types import Clustering, FitResult
from src.refine.options import RefineOptions
from src.tensor.core import DenseTensor


class ClusteringMethod(ABC):
    """A clustering estimator compared in simulation sweeps.

    Attributes:
        requires_truth (bool): Whether ``fit`` needs the true clustering.
    """

    requires_truth: bool = False

    def __init__(
        self,
        observation: str = "gaussian",
        refine: RefineOptions | None = None,
        kmeans: KMeansOptions | None = None,
    ):
        self.observation = observation
        self.refine = refine or RefineOptions()
        self.kmeans = kmeans or KMeansOptions()

    @abstractmethod
    def fit(
        self,
        tensor: DenseTensor,
        ranks: Sequence[int],
        rng: np.random.Generator,
        truth: Clustering | None = None,
    ) -> FitResult:
        """Estimate the clustering of ``tensor`` with ``ranks`` clusters per mode."""
        raise NotImplementedError
