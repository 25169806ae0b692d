from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike, NDArray

# Dense tensors are plain float64 arrays in C order (last index varies fastest).
DenseTensor = NDArray[np.float64]
DenseMatrix = NDArray[np.float64]


@dataclass(frozen=True)
class BlockMeans:
    """Block-averaged tensor together with the blocks that had no entries.

    Attributes:
        values: Averaged tensor. Empty blocks hold 0.
        empty: Boolean mask with the shape of ``values``; True where no entry
            of the input contributed to the average.
    """

    values: DenseTensor
    empty: NDArray[np.bool_]

    @property
    def has_empty(self) -> bool:
        return bool(self.empty.any())


def as_tensor(values: ArrayLike) -> DenseTensor:
    """Convert input to a validated dense tensor.

    Args:
        values: Array-like of order K >= 1.

    Returns:
        DenseTensor: float64 array with the same shape.

    Raises:
        ValueError: If the order is 0, a dimension is 0 or an entry is not finite.
    """
    tensor = np.asarray(values, dtype=np.float64)
    if tensor.ndim < 1:
        logger.error("Tensor order must be at least 1")
        raise ValueError("Tensor order must be at least 1")
    if any(dim < 1 for dim in tensor.shape):
        logger.error(f"Tensor dimensions must be positive, got {tensor.shape}")
        raise ValueError(f"Tensor dimensions must be positive, got {tensor.shape}")
    if not np.all(np.isfinite(tensor)):
        logger.error("Tensor entries must be finite")
        raise ValueError("Tensor entries must be finite")
    return tensor


def _check_mode(order: int, mode: int) -> None:
    if not 0 <= mode < order:
        logger.error(f"Mode {mode} out of range for an order-{order} tensor")
        raise ValueError(f"Mode {mode} out of range for an order-{order} tensor")


def matricize(tensor: DenseTensor, mode: int) -> DenseMatrix:
    """Unfold a tensor along ``mode`` (0-based).

    Row ``i`` of the result is the mode-``mode`` slice at index ``i``; columns
    run over the remaining indices in ascending mode order with the last index
    varying fastest.

    Args:
        tensor: Order-K tensor.
        mode: Mode index in ``[0, K)``.

    Returns:
        DenseMatrix: Matrix of shape ``(p_mode, prod of the other dims)``.
    """
    _check_mode(tensor.ndim, mode)
    return np.moveaxis(tensor, mode, 0).reshape(tensor.shape[mode], -1)


def refold(matrix: DenseMatrix, mode: int, dims: Sequence[int]) -> DenseTensor:
    """Inverse of :func:`matricize`."""
    dims = tuple(int(d) for d in dims)
    _check_mode(len(dims), mode)
    rest = dims[:mode] + dims[mode + 1 :]
    expected = (dims[mode], prod(rest))
    if matrix.shape != expected:
        logger.error(f"Cannot refold matrix of shape {matrix.shape} into {dims}")
        raise ValueError(f"Cannot refold matrix of shape {matrix.shape} into {dims}")
    return np.moveaxis(matrix.reshape((dims[mode],) + rest), 0, mode)


def multilinear_multiply(
    core: DenseTensor, factors: Sequence[tuple[DenseMatrix, int]]
) -> DenseTensor:
    """Apply matrices along tensor modes, ``core x_k M_k`` for each factor.

    Factors are applied in the given order; each matrix must have as many
    columns as the current dimension of its mode.

    Args:
        core: Tensor to multiply.
        factors: Pairs ``(matrix, mode)``.

    Returns:
        DenseTensor: The product tensor.

    Raises:
        ValueError: If a mode is out of range or a matrix does not conform.
    """
    result = np.asarray(core, dtype=np.float64)
    for matrix, mode in factors:
        _check_mode(result.ndim, mode)
        matrix = np.asarray(matrix, dtype=np.float64)
        if matrix.ndim != 2 or matrix.shape[1] != result.shape[mode]:
            logger.error(
                f"Factor of shape {matrix.shape} does not conform to mode {mode} "
                f"of a tensor with shape {result.shape}"
            )
            raise ValueError(
                f"Factor of shape {matrix.shape} does not conform to mode {mode} "
                f"of a tensor with shape {result.shape}"
            )
        result = np.moveaxis(np.tensordot(matrix, result, axes=(1, mode)), 0, mode)
    return result


def square_unfold(tensor: DenseTensor) -> DenseMatrix:
    """Nearly square unfolding of a cubical tensor.

    The first ``K // 2`` modes index the rows and the remaining modes index
    the columns, so a ``p^K`` tensor becomes ``p^(K//2) x p^(K - K//2)``.
    """
    dims = set(tensor.shape)
    if len(dims) != 1:
        logger.error(f"Square unfolding needs a cubical tensor, got {tensor.shape}")
        raise ValueError(f"Square unfolding needs a cubical tensor, got {tensor.shape}")
    p = tensor.shape[0]
    return tensor.reshape(p ** (tensor.ndim // 2), -1)


def averaging_matrix(
    labels: NDArray[np.int_], num_clusters: int
) -> tuple[DenseMatrix, NDArray[np.bool_]]:
    """Build the ``r x p`` matrix averaging the members of each cluster.

    Returns:
        tuple: The averaging matrix (rows of empty clusters are zero) and a
            boolean vector flagging empty clusters.
    """
    labels = np.asarray(labels, dtype=np.int64)
    counts = np.bincount(labels, minlength=num_clusters)
    weights = np.zeros((num_clusters, labels.size))
    weights[labels, np.arange(labels.size)] = 1.0
    nonempty = counts > 0
    weights[nonempty] /= counts[nonempty, None]
    return weights, ~nonempty


def _empty_mask(shape: tuple[int, ...], empty_per_mode: dict[int, NDArray]) -> NDArray:
    mask = np.zeros(shape, dtype=bool)
    for mode, empty in empty_per_mode.items():
        index: list[slice | NDArray] = [slice(None)] * len(shape)
        index[mode] = empty
        mask[tuple(index)] = True
    return mask


def _check_assignments(
    tensor: DenseTensor,
    assignments: Sequence[NDArray[np.int_]],
    num_clusters: Sequence[int],
    modes: Sequence[int],
) -> None:
    if len(assignments) != tensor.ndim or len(num_clusters) != tensor.ndim:
        logger.error(
            f"Need one assignment per mode: tensor order {tensor.ndim}, "
            f"got {len(assignments)} assignments"
        )
        raise ValueError(
            f"Need one assignment per mode: tensor order {tensor.ndim}, "
            f"got {len(assignments)} assignments"
        )
    for mode in modes:
        labels = np.asarray(assignments[mode])
        if labels.shape != (tensor.shape[mode],):
            logger.error(f"Assignment for mode {mode} has wrong length {labels.shape}")
            raise ValueError(f"Assignment for mode {mode} has wrong length {labels.shape}")
        if labels.size and (labels.min() < 0 or labels.max() >= num_clusters[mode]):
            logger.error(f"Labels for mode {mode} outside [0, {num_clusters[mode]})")
            raise ValueError(f"Labels for mode {mode} outside [0, {num_clusters[mode]})")


def block_average(
    tensor: DenseTensor,
    assignments: Sequence[NDArray[np.int_]],
    num_clusters: Sequence[int],
) -> BlockMeans:
    """Average ``tensor`` over every block of the clustering.

    Entry ``(a_1, ..., a_K)`` of the result is the mean of ``tensor`` over all
    index tuples with ``z_k(i_k) = a_k``. Blocks without entries are 0 and
    flagged in ``BlockMeans.empty``.
    """
    modes = range(tensor.ndim)
    _check_assignments(tensor, assignments, num_clusters, modes)
    factors = []
    empty = {}
    for mode in modes:
        weights, empty[mode] = averaging_matrix(assignments[mode], num_clusters[mode])
        factors.append((weights, mode))
    values = multilinear_multiply(tensor, factors)
    return BlockMeans(values=values, empty=_empty_mask(values.shape, empty))


def reduced_tensor(
    tensor: DenseTensor,
    assignments: Sequence[NDArray[np.int_]],
    num_clusters: Sequence[int],
    mode: int,
) -> BlockMeans:
    """Average ``tensor`` over the clusters of every mode except ``mode``.

    The result keeps dimension ``p_mode`` on ``mode`` and ``r_j`` on every
    other mode; ``assignments[mode]`` is not used.
    """
    _check_mode(tensor.ndim, mode)
    others = [j for j in range(tensor.ndim) if j != mode]
    _check_assignments(tensor, assignments, num_clusters, others)
    factors = []
    empty = {}
    for j in others:
        weights, empty[j] = averaging_matrix(assignments[j], num_clusters[j])
        factors.append((weights, j))
    values = multilinear_multiply(tensor, factors)
    return BlockMeans(values=values, empty=_empty_mask(values.shape, empty))
