from math import prod
from typing import Sequence

from loguru import logger

from src.initialize.base import Denoiser, check_ranks
from src.tensor.core import DenseTensor, square_unfold
from src.tensor.linalg import low_rank_project, top_left_singular_vectors


def bernoulli_denoise(tensor: DenseTensor, ranks: Sequence[int]) -> DenseTensor:
    """Best low-rank approximation of the square unfolding, refolded.

    The rank is the product of the cluster numbers of the column modes,
    ``r^ceil(K/2)`` for equal ranks.
    """
    ranks = check_ranks(tensor, ranks)
    unfolded = square_unfold(tensor)
    column_modes = ranks[tensor.ndim // 2 :]
    rank = min(prod(column_modes), *unfolded.shape)
    logger.debug(f"Square unfolding {unfolded.shape} truncated to rank {rank}")
    basis = top_left_singular_vectors(unfolded, rank).left_vectors
    return low_rank_project(unfolded, basis).reshape(tensor.shape)


class SquareUnfoldingDenoiser(Denoiser):
    """Denoiser for binary observations."""

    def denoise(self, tensor: DenseTensor, ranks: Sequence[int]) -> DenseTensor:
        return bernoulli_denoise(tensor, ranks)
