import math

import numpy as np
from loguru import logger
from numpy.typing import NDArray
from scipy import stats

from ..base import DegreeFamily


class ConstantDegrees(DegreeFamily):
    """No degree heterogeneity."""

    def draw(self, size: int, rng: np.random.Generator) -> NDArray[np.float64]:
        return np.ones(size)


class AbsNormalDegrees(DegreeFamily):
    """``|X| + 1 - 1/sqrt(2 pi)`` with ``X ~ N(0, 1)``."""

    def draw(self, size: int, rng: np.random.Generator) -> NDArray[np.float64]:
        return stats.halfnorm.rvs(size=size, random_state=rng) + 1.0 - 1.0 / math.sqrt(2 * math.pi)


class ParetoDegrees(DegreeFamily):
    """
    Pareto degrees with density ``a b^a x^-(a+1)`` on ``x >= b``.

    The scale ``b = (a - 1) / a`` makes the mean one; smaller shapes give
    heavier tails and stronger heterogeneity.
    """

    def __init__(self, shape: float = 2.0):
        if not shape > 1:
            logger.error(f"Pareto shape must exceed 1 for a finite mean, got {shape}")
            raise ValueError(f"Pareto shape must exceed 1 for a finite mean, got {shape}")
        self.shape = float(shape)
        self.scale = (self.shape - 1.0) / self.shape

    def draw(self, size: int, rng: np.random.Generator) -> NDArray[np.float64]:
        return stats.pareto.rvs(self.shape, scale=self.scale, size=size, random_state=rng)
