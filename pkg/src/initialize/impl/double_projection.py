from typing import Sequence

from src.initialize.base import Denoiser, check_ranks
from src.tensor.core import DenseTensor, matricize, multilinear_multiply
from src.tensor.linalg import projector, top_left_singular_vectors


def _mode_projector(tensor: DenseTensor, mode: int, rank: int):
    unfolded = matricize(tensor, mode)
    rank = min(rank, *unfolded.shape)
    return projector(top_left_singular_vectors(unfolded, rank).left_vectors)


def double_projection_denoise(tensor: DenseTensor, ranks: Sequence[int]) -> DenseTensor:
    """Two-pass HOSVD estimate of the mean tensor.

    For each mode ``k`` a first basis ``U_pre`` is taken from every unfolding
    of ``tensor``; the tensor projected on all modes except ``k`` gives the
    refined basis ``U_k``. The estimate is ``tensor x_k U_k U_k^T`` over all
    modes.

    Args:
        tensor: Observed tensor.
        ranks: Cluster number per mode, ``1 <= r_k <= p_k``.

    Returns:
        DenseTensor: Denoised tensor of multilinear rank at most ``ranks``.
    """
    ranks = check_ranks(tensor, ranks)
    order = tensor.ndim
    first_pass = [_mode_projector(tensor, mode, ranks[mode]) for mode in range(order)]
    refined = []
    for mode in range(order):
        projected = multilinear_multiply(
            tensor, [(first_pass[j], j) for j in range(order) if j != mode]
        )
        refined.append((_mode_projector(projected, mode, ranks[mode]), mode))
    return multilinear_multiply(tensor, refined)


class DoubleProjectionDenoiser(Denoiser):
    """Denoiser for sub-Gaussian observations."""

    def denoise(self, tensor: DenseTensor, ranks: Sequence[int]) -> DenseTensor:
        return double_projection_denoise(tensor, ranks)
