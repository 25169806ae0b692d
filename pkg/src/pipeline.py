from math import prod
from typing import Sequence

import numpy as np
from loguru import logger

from .initialize.initializer import WeightedInitializer
from .initialize.kmeans import KMeansOptions
from .model.types import Clustering, FitResult
from .refine.angle import AngleRefiner
from .refine.options import RefineOptions
from .tensor.core import DenseTensor, as_tensor, block_average
from .select.theta import estimate_theta


def operation_counts(dims: Sequence[int], ranks: Sequence[int]) -> dict[str, int]:
    """Leading-order operation counts of the two stages.

    Initialization costs ``sum_k (p_k + r_k) prod(p)``, which is
    ``K p^(K+1) + K r p^K`` for cubical tensors; one refinement sweep costs
    ``prod(p) + sum_k p_k prod(r)``, i.e. ``p^K + p r^K`` per mode.
    """
    size = prod(dims)
    core_size = prod(ranks)
    return {
        "initialization": sum((p + r) * size for p, r in zip(dims, ranks)),
        "refinement_sweep": size + sum(p * core_size for p in dims),
    }


class DtbmPipeline:
    """
    DtbmPipeline runs the two-stage clustering: weighted spectral
    initialization, then angle-based refinement.

    Attributes:
        initial (Clustering): Output of the initialization stage.
        fit (FitResult): Final result of the last run.
    """

    def __init__(
        self,
        observation: str = "gaussian",
        kmeans: KMeansOptions | None = None,
        refine: RefineOptions | None = None,
    ):
        """
        Initialize the pipeline.

        Args:
            observation (str): Observation model, "gaussian" or "bernoulli".
            kmeans (KMeansOptions | None): Settings of the weighted k-means step.
            refine (RefineOptions | None): Settings of the refinement stage.
        """
        self._initializer = WeightedInitializer(observation, kmeans)
        self._refiner = AngleRefiner(refine)

        self.initial: Clustering
        self.fit: FitResult

    def run(
        self,
        tensor: DenseTensor,
        ranks: Sequence[int],
        rng: np.random.Generator,
        refine: bool = True,
    ) -> FitResult:
        """
        Run the pipeline and return the fitted clustering.

        Args:
            tensor (DenseTensor): Observed tensor.
            ranks (Sequence[int]): Cluster number per mode.
            rng (np.random.Generator): Randomness of both stages.
            refine (bool): Skip the refinement stage when False.

        Returns:
            FitResult: Estimated clustering, core and degrees.
        """
        tensor = as_tensor(tensor)
        counts = operation_counts(tensor.shape, ranks)
        logger.debug(f"Operation counts: {counts}")
        init_rng, refine_rng = rng.spawn(2)

        logger.info("Starting initialization...")
        self.initial = self._initializer.run(tensor, ranks, init_rng)
        logger.info("Initialization completed.")

        if refine:
            logger.info("Starting angle-based refinement...")
            self.fit = self._refiner.run(tensor, self.initial, refine_rng)
            logger.info(f"Refinement completed after {self.fit.iterations_run} sweeps.")
        else:
            self.fit = initial_fit(tensor, self.initial, self._initializer.degenerate_rows)
        self.fit.operation_counts = counts
        return self.fit


def initial_fit(
    tensor: DenseTensor,
    z: Clustering,
    degenerate_rows: tuple = (),
) -> FitResult:
    """Package a clustering that was not refined as a ``FitResult``."""
    theta = tuple(estimate_theta(tensor, z, mode)[0] for mode in range(tensor.ndim))
    return FitResult(
        z_hat=z,
        core_hat=block_average(tensor, z.assignments, z.num_clusters).values,
        theta_hat=theta,
        degenerate_rows=degenerate_rows,
        empty_clusters=tuple(np.flatnonzero(z.sizes(m) == 0) for m in range(z.order)),
    )
