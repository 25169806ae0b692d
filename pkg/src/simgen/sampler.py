import math
from dataclasses import dataclass, replace

import numpy as np
from loguru import logger
from numpy.typing import NDArray

from src.config import SimSpec
from src.model.params import mean_tensor
from src.model.types import Clustering, DtbmParams, Labels
from src.model.validator import ParameterSpace, ParamsValidator
from src.tensor.core import DenseTensor

from .core import assortative_core, calibrate_alpha
from .degrees.base import DegreeFamily
from .degrees.factory import DegreeFamilyFactory

# Noise scale matching the sub-Gaussian parameter of Bernoulli entries.
BERNOULLI_SIGMA = 0.5
# Largest Bernoulli mean after degree multiplication, when rescaling is needed.
BERNOULLI_MAX_MEAN = 0.9


@dataclass(frozen=True)
class Simulation:
    """Observed tensor, its generating parameters and generation flags."""

    tensor: DenseTensor
    params: DtbmParams
    alpha: float
    resampled_clusterings: int = 0
    clamped_entries: int = 0


def sample_clustering(
    p: int, r: int, rng: np.random.Generator, max_attempts: int = 1000
) -> tuple[Labels, int]:
    """
    Draw i.i.d. uniform labels, redrawing until no cluster is empty.

    Returns:
        tuple: Labels in ``[0, r)`` and the number of redraws.
    """
    if not 1 <= r <= p:
        logger.error(f"Need 1 <= r <= p, got r={r}, p={p}")
        raise ValueError(f"Need 1 <= r <= p, got r={r}, p={p}")
    for attempt in range(max_attempts):
        labels = rng.integers(r, size=p, dtype=np.int64)
        if np.bincount(labels, minlength=r).min() > 0:
            if attempt:
                logger.debug(f"Clustering redrawn {attempt} times to avoid empty clusters")
            return labels, attempt
    logger.error(f"No clustering without empty clusters after {max_attempts} draws")
    raise ValueError(f"No clustering without empty clusters after {max_attempts} draws")


def sample_theta(
    labels: Labels, num_clusters: int, family: DegreeFamily, rng: np.random.Generator
) -> NDArray[np.float64]:
    """Draw degrees and rescale them so each cluster's degrees sum to its size."""
    theta = family.draw(labels.size, rng)
    sizes = np.bincount(labels, minlength=num_clusters)
    totals = np.bincount(labels, weights=theta, minlength=num_clusters)
    scale = np.divide(sizes, totals, out=np.zeros(num_clusters), where=totals > 0)
    return theta * scale[labels]


def _core(spec: SimSpec) -> tuple[DenseTensor, float]:
    if spec.r == 1:
        value = spec.core_row_norm if spec.observation == "gaussian" else spec.bernoulli_peak
        return np.full((1,) * spec.K, value), 1.0

    if spec.observation == "bernoulli":
        alpha = calibrate_alpha(spec.p, spec.K, spec.r, spec.gamma, BERNOULLI_SIGMA)
        return assortative_core(spec.r, spec.K, alpha, spec.bernoulli_peak / alpha), alpha

    # noiseless data keeps the geometry of unit-variance noise
    sigma = spec.sigma if spec.sigma > 0 else 1.0
    alpha = calibrate_alpha(spec.p, spec.K, spec.r, spec.gamma, sigma)
    s2 = spec.core_row_norm / math.sqrt(alpha**2 + spec.r ** (spec.K - 1) - 1)
    return assortative_core(spec.r, spec.K, alpha, s2), alpha


def _draw_modes(
    spec: SimSpec,
    family: DegreeFamily,
    cluster_rng: np.random.Generator,
    degree_rng: np.random.Generator,
) -> tuple[list[Labels], list[NDArray[np.float64]], int]:
    draws = 1 if spec.symmetric else spec.K
    labels, theta, redraws = [], [], 0
    for _ in range(draws):
        mode_labels, empty_redraws = sample_clustering(spec.p, spec.r, cluster_rng)
        labels.append(mode_labels)
        theta.append(sample_theta(mode_labels, spec.r, family, degree_rng))
        redraws += empty_redraws
    if spec.symmetric:
        labels, theta = labels * spec.K, theta * spec.K
    return labels, theta, redraws


def _fit_unit_interval(params: DtbmParams) -> DtbmParams:
    # a scalar rescale keeps every angle, so the calibrated gap is unchanged
    peak = float(mean_tensor(params).max())
    if peak <= 1.0:
        return params
    logger.debug(f"Bernoulli core rescaled by {BERNOULLI_MAX_MEAN / peak:.4g}, peak mean was {peak:.4g}")
    return replace(params, core=params.core * (BERNOULLI_MAX_MEAN / peak))


def sample_params(
    spec: SimSpec,
    rng: np.random.Generator,
    space: ParameterSpace | None = None,
    max_attempts: int = 1000,
) -> tuple[DtbmParams, float, int]:
    """
    Draw ground-truth parameters for ``spec`` inside the parameter space.

    Clusterings and degrees are redrawn until the parameters pass
    :func:`src.model.validator.validate`. A Bernoulli core whose largest mean
    would exceed one is scaled down so that the largest mean is
    ``BERNOULLI_MAX_MEAN``.

    Args:
        spec (SimSpec): Instance description.
        rng (np.random.Generator): Randomness for labels and degrees.
        space (ParameterSpace | None): Bounds to validate against.
        max_attempts (int): Draws tried before giving up.

    Returns:
        tuple: Parameters, the core ratio ``alpha`` and the number of redraws,
            counting both empty-cluster and validation redraws.

    Raises:
        ValueError: If no draw passes validation.
    """
    core, alpha = _core(spec)
    family = DegreeFamilyFactory.create(spec.degree_family, **spec.degree_kwargs())
    cluster_rng, degree_rng = rng.spawn(2)
    sigma = BERNOULLI_SIGMA if spec.observation == "bernoulli" else spec.sigma
    validator = ParamsValidator(space)

    resampled = 0
    for attempt in range(max_attempts):
        labels, theta, redraws = _draw_modes(spec, family, cluster_rng, degree_rng)
        resampled += redraws
        params = DtbmParams(
            z=Clustering.from_labels(labels, [spec.r] * spec.K),
            core=core,
            theta=tuple(theta),
            sigma=sigma,
        )
        if spec.observation == "bernoulli":
            params = _fit_unit_interval(params)
        report = validator.validate(params, log_failures=False)
        if report.passed:
            if attempt:
                logger.debug(f"Parameters redrawn {attempt} times to pass validation")
            return params, alpha, resampled + attempt
        logger.debug(f"Draw {attempt} rejected: {report.messages}")

    logger.error(f"No parameters passed validation after {max_attempts} draws")
    raise ValueError(f"No parameters passed validation after {max_attempts} draws")


def sample_observation(spec: SimSpec, rng: np.random.Generator | None = None) -> Simulation:
    """
    Draw a dTBM instance and its observation.

    Gaussian data adds ``sigma`` times standard normal noise to the mean;
    Bernoulli data draws every entry independently with the mean as success
    probability. Means already lie in ``[0, 1]`` after :func:`sample_params`;
    anything outside is clamped and counted in ``clamped_entries``.

    Args:
        spec (SimSpec): Instance description.
        rng (np.random.Generator | None): Randomness; seeded from ``spec.seed``
            when omitted.

    Returns:
        Simulation: Tensor, generating parameters and flags.
    """
    rng = rng if rng is not None else np.random.default_rng(spec.seed)
    params_rng, noise_rng = rng.spawn(2)
    params, alpha, resampled = sample_params(spec, params_rng)
    mean = mean_tensor(params)

    clamped = 0
    if spec.observation == "bernoulli":
        outside = (mean < 0) | (mean > 1)
        clamped = int(outside.sum())
        if clamped:
            logger.warning(f"{clamped} Bernoulli means clamped into [0, 1]")
        tensor = noise_rng.binomial(1, np.clip(mean, 0.0, 1.0)).astype(np.float64)
    elif spec.sigma == 0:
        tensor = mean.copy()
    else:
        tensor = mean + spec.sigma * noise_rng.standard_normal(mean.shape)

    return Simulation(
        tensor=tensor,
        params=params,
        alpha=alpha,
        resampled_clusterings=resampled,
        clamped_entries=clamped,
    )
