from abc import ABC, abstractmethod
from typing import Sequence

from loguru import logger

from src.tensor.core import DenseTensor


class Denoiser(ABC):
    """Spectral estimate of the mean tensor used before clustering."""

    @abstractmethod
    def denoise(self, tensor: DenseTensor, ranks: Sequence[int]) -> DenseTensor:
        """Estimate the mean of ``tensor`` given per-mode cluster numbers."""
        raise NotImplementedError


def check_ranks(tensor: DenseTensor, ranks: Sequence[int]) -> list[int]:
    ranks = [int(r) for r in ranks]
    if len(ranks) != tensor.ndim:
        logger.error(f"Need {tensor.ndim} ranks, got {len(ranks)}")
        raise ValueError(f"Need {tensor.ndim} ranks, got {len(ranks)}")
    for mode, (r, p) in enumerate(zip(ranks, tensor.shape)):
        if not 1 <= r <= p:
            logger.error(f"Rank {r} for mode {mode} outside [1, {p}]")
            raise ValueError(f"Rank {r} for mode {mode} outside [1, {p}]")
    return ranks
