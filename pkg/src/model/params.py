import math

import numpy as np
from loguru import logger
from scipy.spatial.distance import pdist

from src.tensor.core import DenseTensor, matricize, multilinear_multiply
from src.tensor.linalg import normalize_rows

from .types import DtbmParams


def mean_tensor(params: DtbmParams) -> DenseTensor:
    """Mean tensor ``S x_1 Theta_1 M_1 ... x_K Theta_K M_K``.

    ``Theta_k M_k`` is the ``p_k x r_k`` matrix holding ``theta_k(i)`` at
    ``(i, z_k(i))``. The parameters are not validated here; see
    :func:`src.model.validator.validate`.
    """
    factors = [
        (params.z.membership(mode, params.theta[mode]), mode)
        for mode in range(params.order)
    ]
    return multilinear_multiply(params.core, factors)


def angle_gap(core: DenseTensor, mode: int) -> float:
    """Minimal distance between the normalized rows of ``Mat_mode(core)``.

    Returns 1 when the mode has a single cluster.
    """
    rows = matricize(core, mode)
    if rows.shape[0] == 1:
        return 1.0
    return float(pdist(normalize_rows(rows)).min())


def min_angle_gap(core: DenseTensor) -> float:
    return min(angle_gap(core, mode) for mode in range(core.ndim))


def snr(params: DtbmParams) -> float:
    """Signal-to-noise ratio ``Delta_min^2 / sigma^2``; ``inf`` for noiseless params."""
    gap = min_angle_gap(params.core)
    if params.sigma == 0:
        logger.debug("Noise scale is 0, reporting infinite SNR")
        return math.inf
    return gap**2 / params.sigma**2


def signal_exponent(params: DtbmParams) -> float:
    """``gamma = log_p(SNR)`` for cubical tensors."""
    dims = set(params.dims)
    if len(dims) != 1:
        logger.error(f"Signal exponent needs cubical dimensions, got {params.dims}")
        raise ValueError(f"Signal exponent needs cubical dimensions, got {params.dims}")
    ratio = snr(params)
    if ratio == 0:
        return -math.inf
    return math.log(ratio) / math.log(dims.pop())


def degree_sums(params: DtbmParams, mode: int) -> np.ndarray:
    """``l1`` norm of the degree vector within each cluster of ``mode``."""
    z = params.z
    return np.bincount(
        z.assignments[mode], weights=params.theta[mode], minlength=z.num_clusters[mode]
    )
