import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np
from loguru import logger

from src.initialize.kmeans import KMeansOptions
from src.model.params import mean_tensor
from src.model.types import DtbmParams, FitResult
from src.pipeline import DtbmPipeline
from src.refine.options import RefineOptions
from src.tensor.core import DenseTensor

from .theta import rescale_to_sizes

Penalty = Literal["symmetric", "asymmetric"]


@dataclass(frozen=True)
class BicScore:
    """BIC of one candidate cluster number.

    Attributes:
        r: Candidate cluster number.
        score: Criterion value; ``-inf`` when the fit reproduces the data exactly.
        fit: Fit the score was computed from.
        flagged: True when the residual was exactly zero.
    """

    r: int
    score: float
    fit: FitResult
    flagged: bool = False


def effective_parameters(
    dims: Sequence[int], ranks: Sequence[int], penalty: Penalty = "symmetric"
) -> float:
    """Effective number of parameters of a fit.

    The symmetric count ``r^K + p(log r + 1) - r`` assumes cubical dimensions
    and a shared cluster number; the asymmetric count is
    ``prod(r_k) + sum_k p_k(log r_k + 1) - sum_k r_k``.
    """
    if penalty == "symmetric":
        if len(set(dims)) != 1 or len(set(ranks)) != 1:
            logger.error(f"Symmetric penalty needs cubical dims and equal ranks, got {dims}, {ranks}")
            raise ValueError(
                f"Symmetric penalty needs cubical dims and equal ranks, got {dims}, {ranks}"
            )
        p, r, order = dims[0], ranks[0], len(dims)
        return r**order + p * (math.log(r) + 1) - r
    if penalty == "asymmetric":
        return (
            math.prod(ranks)
            + sum(p * (math.log(r) + 1) for p, r in zip(dims, ranks))
            - sum(ranks)
        )
    logger.error(f"Unknown penalty: {penalty}")
    raise ValueError(f"Unknown penalty: {penalty}")


def reconstruct(tensor: DenseTensor, fit: FitResult) -> DenseTensor:
    """Mean tensor implied by a fit, with degrees summing to cluster sizes."""
    z = fit.z_hat
    theta = tuple(rescale_to_sizes(fit.theta_hat[mode], z, mode) for mode in range(z.order))
    return mean_tensor(DtbmParams(z=z, core=fit.core_hat, theta=theta, sigma=0.0))


def bic(
    tensor: DenseTensor,
    r: int,
    rng: np.random.Generator,
    penalty: Penalty = "symmetric",
    observation: str = "gaussian",
    kmeans: KMeansOptions | None = None,
    refine: RefineOptions | None = None,
) -> BicScore:
    """
    Fit ``r`` clusters on every mode and score the fit.

    The score is ``N log(||X_hat - Y||_F^2) + p_e log N`` with ``N`` the number
    of tensor entries and natural logarithms throughout.

    Args:
        tensor (DenseTensor): Observed tensor.
        r (int): Candidate cluster number, used on every mode.
        rng (np.random.Generator): Randomness of the fit.
        penalty (Penalty): Parameter count, "symmetric" or "asymmetric".
        observation (str): Observation model passed to the pipeline.
        kmeans (KMeansOptions | None): k-means settings.
        refine (RefineOptions | None): Refinement settings.

    Returns:
        BicScore: Score and fit for ``r``.
    """
    ranks = [int(r)] * tensor.ndim
    fit = DtbmPipeline(observation, kmeans, refine).run(tensor, ranks, rng)
    size = tensor.size
    rss = float(np.sum((reconstruct(tensor, fit) - tensor) ** 2))
    penalty_term = effective_parameters(tensor.shape, ranks, penalty) * math.log(size)

    if rss == 0.0:
        logger.warning(f"Zero residual for r={r}; score set to -inf")
        return BicScore(r=int(r), score=-math.inf, fit=fit, flagged=True)
    score = size * math.log(rss) + penalty_term
    logger.debug(f"BIC r={r}: rss={rss:.6g}, score={score:.6g}")
    return BicScore(r=int(r), score=score, fit=fit)


def select_r(
    tensor: DenseTensor,
    candidates: Sequence[int],
    rng: np.random.Generator,
    penalty: Penalty = "symmetric",
    observation: str = "gaussian",
    kmeans: KMeansOptions | None = None,
    refine: RefineOptions | None = None,
) -> tuple[int, list[BicScore]]:
    """
    Choose the cluster number minimizing BIC.

    Every candidate is fitted with its own substream of ``rng``; ties go to
    the smaller candidate.

    Returns:
        tuple: Selected ``r`` and the scores in ascending candidate order.

    Raises:
        ValueError: If ``candidates`` is empty.
    """
    ordered = sorted({int(r) for r in candidates})
    if not ordered:
        logger.error("Need at least one candidate cluster number")
        raise ValueError("Need at least one candidate cluster number")

    logger.info(f"Starting BIC selection over candidates {ordered}...")
    scores = [
        bic(tensor, r, child, penalty, observation, kmeans, refine)
        for r, child in zip(ordered, rng.spawn(len(ordered)))
    ]
    best = scores[0]
    for candidate in scores[1:]:
        if candidate.score < best.score:
            best = candidate
    logger.info(f"BIC selection completed: r={best.r}.")
    return best.r, scores
