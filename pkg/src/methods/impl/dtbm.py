from typing import Sequence

import numpy as np
from loguru import logger

from src.model.types import Clustering, FitResult
from src.pipeline import DtbmPipeline
from src.refine.angle import oracle_refine
from src.tensor.core import DenseTensor

from ..base import ClusteringMethod


class DtbmInit(ClusteringMethod):
    """Weighted spectral initialization only."""

    def fit(
        self,
        tensor: DenseTensor,
        ranks: Sequence[int],
        rng: np.random.Generator,
        truth: Clustering | None = None,
    ) -> FitResult:
        pipeline = DtbmPipeline(self.observation, self.kmeans, self.refine)
        return pipeline.run(tensor, ranks, rng, refine=False)


class DtbmFull(ClusteringMethod):
    """Initialization followed by angle-based refinement."""

    def fit(
        self,
        tensor: DenseTensor,
        ranks: Sequence[int],
        rng: np.random.Generator,
        truth: Clustering | None = None,
    ) -> FitResult:
        pipeline = DtbmPipeline(self.observation, self.kmeans, self.refine)
        return pipeline.run(tensor, ranks, rng)


class Oracle(ClusteringMethod):
    """Angle-based refinement started from the true clustering."""

    requires_truth = True

    def fit(
        self,
        tensor: DenseTensor,
        ranks: Sequence[int],
        rng: np.random.Generator,
        truth: Clustering | None = None,
    ) -> FitResult:
        if truth is None:
            logger.error("The oracle method needs the true clustering")
            raise ValueError("The oracle method needs the true clustering")
        if list(truth.num_clusters) != [int(r) for r in ranks]:
            logger.error(f"True cluster counts {truth.num_clusters} differ from ranks {ranks}")
            raise ValueError(f"True cluster counts {truth.num_clusters} differ from ranks {ranks}")
        return oracle_refine(tensor, truth, self.refine, rng)
