import math

import numpy as np
from loguru import logger
from scipy.optimize import brentq

from src.model.params import angle_gap
from src.tensor.core import DenseTensor

# Squared angle gaps stay below this supremum for every finite ratio.
MAX_SQUARED_GAP = 2.0


def assortative_core(r: int, order: int, alpha: float, s2: float) -> DenseTensor:
    """Core with ``s1 = alpha * s2`` on the superdiagonal and ``s2`` elsewhere.

    Args:
        r: Clusters per mode.
        order: Tensor order ``K``.
        alpha: Ratio ``s1 / s2``, at least one.
        s2: Off-diagonal value, positive.

    Returns:
        DenseTensor: Core of shape ``(r,) * order``.
    """
    if r < 1 or order < 1:
        logger.error(f"Need r >= 1 and K >= 1, got r={r}, K={order}")
        raise ValueError(f"Need r >= 1 and K >= 1, got r={r}, K={order}")
    if alpha < 1 or s2 <= 0:
        logger.error(f"Need alpha >= 1 and s2 > 0, got alpha={alpha}, s2={s2}")
        raise ValueError(f"Need alpha >= 1 and s2 > 0, got alpha={alpha}, s2={s2}")
    core = np.full((r,) * order, float(s2))
    diagonal = np.arange(r)
    core[(diagonal,) * order] = alpha * s2
    return core


def squared_gap(r: int, order: int, alpha: float) -> float:
    """Squared angle gap of the mode-0 unfolding; independent of ``s2``."""
    return angle_gap(assortative_core(r, order, alpha, 1.0), 0) ** 2


def calibrate_alpha(
    p: int, order: int, r: int, gamma: float, sigma: float = 1.0, xtol: float = 1e-13
) -> float:
    """
    Find the ratio ``alpha`` whose assortative core has ``Delta_min^2 = sigma^2 p^gamma``.

    Args:
        p (int): Dimension of each mode.
        order (int): Tensor order ``K``.
        r (int): Clusters per mode, at least two.
        gamma (float): Target signal exponent.
        sigma (float): Noise scale.
        xtol (float): Root tolerance on ``alpha``.

    Returns:
        float: The calibrated ratio, greater than one.

    Raises:
        ValueError: If the target gap is not attainable.
    """
    if r < 2 or order < 2:
        logger.error(f"Angle gap calibration needs r >= 2 and K >= 2, got r={r}, K={order}")
        raise ValueError(f"Angle gap calibration needs r >= 2 and K >= 2, got r={r}, K={order}")
    target = sigma**2 * float(p) ** gamma
    if not 0 < target < MAX_SQUARED_GAP:
        logger.error(f"Target squared gap {target:.6g} outside (0, {MAX_SQUARED_GAP})")
        raise ValueError(f"Target squared gap {target:.6g} outside (0, {MAX_SQUARED_GAP})")

    def excess(alpha: float) -> float:
        return squared_gap(r, order, alpha) - target

    upper = 2.0
    while excess(upper) < 0:
        upper *= 2.0
        if not math.isfinite(upper):
            logger.error(f"No finite alpha reaches squared gap {target:.6g}")
            raise ValueError(f"No finite alpha reaches squared gap {target:.6g}")
    alpha = brentq(excess, 1.0, upper, xtol=xtol, rtol=4 * np.finfo(float).eps)
    logger.debug(f"Calibrated alpha={alpha:.12g} for p={p}, K={order}, r={r}, gamma={gamma}")
    return float(alpha)
