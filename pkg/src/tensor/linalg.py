from dataclasses import dataclass

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike, NDArray
from scipy.linalg import svd

from .core import DenseMatrix


@dataclass(frozen=True)
class TruncatedSvd:
    """Top-r left singular vectors and singular values of a matrix."""

    left_vectors: DenseMatrix
    singular_values: NDArray[np.float64]

    @property
    def rank(self) -> int:
        return self.left_vectors.shape[1]


def _fix_signs(vectors: DenseMatrix, tol: float = 1e-12) -> DenseMatrix:
    # first nonzero component of every column made nonnegative
    vectors = vectors.copy()
    for j in range(vectors.shape[1]):
        column = vectors[:, j]
        nonzero = np.flatnonzero(np.abs(column) > tol * max(np.abs(column).max(), 1.0))
        if nonzero.size and column[nonzero[0]] < 0:
            vectors[:, j] = -column
    return vectors


def top_left_singular_vectors(matrix: DenseMatrix, rank: int) -> TruncatedSvd:
    """Compute the top-``rank`` left singular subspace of ``matrix``.

    Singular vectors follow a deterministic sign convention: the first
    nonzero component of each vector is nonnegative.

    Args:
        matrix: Real matrix with finite entries.
        rank: Number of singular vectors, ``1 <= rank <= min(matrix.shape)``.

    Returns:
        TruncatedSvd: Orthonormal ``p x rank`` basis and the leading singular values.

    Raises:
        ValueError: If ``rank`` is out of range or the matrix has non-finite entries.
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    if not 1 <= rank <= min(matrix.shape):
        logger.error(f"Rank {rank} out of range for a matrix of shape {matrix.shape}")
        raise ValueError(f"Rank {rank} out of range for a matrix of shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        logger.error("Matrix entries must be finite")
        raise ValueError("Matrix entries must be finite")
    left, values, _ = svd(matrix, full_matrices=False, lapack_driver="gesdd")
    return TruncatedSvd(
        left_vectors=_fix_signs(left[:, :rank]), singular_values=values[:rank]
    )


def low_rank_project(matrix: DenseMatrix, basis: DenseMatrix) -> DenseMatrix:
    """Project the columns of ``matrix`` onto the span of ``basis``: ``U U^T M``."""
    if basis.shape[0] != matrix.shape[0]:
        logger.error(
            f"Basis with {basis.shape[0]} rows cannot project a matrix with "
            f"{matrix.shape[0]} rows"
        )
        raise ValueError(
            f"Basis with {basis.shape[0]} rows cannot project a matrix with "
            f"{matrix.shape[0]} rows"
        )
    return basis @ (basis.T @ matrix)


def projector(basis: DenseMatrix) -> DenseMatrix:
    return basis @ basis.T


def normalize(vector: ArrayLike) -> NDArray[np.float64]:
    """Scale to unit Euclidean norm; the zero vector maps to itself."""
    vector = np.asarray(vector, dtype=np.float64)
    norm = np.linalg.norm(vector)
    if norm == 0:
        return np.zeros_like(vector)
    return vector / norm


def normalize_rows(matrix: DenseMatrix) -> DenseMatrix:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    safe = np.where(norms > 0, norms, 1.0)
    return np.where(norms > 0, matrix / safe, 0.0)


def cosine(a: ArrayLike, b: ArrayLike) -> float:
    """Cosine of the angle between two vectors, 0 if either is zero."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    norm = np.linalg.norm(a) * np.linalg.norm(b)
    if norm == 0:
        return 0.0
    return float(np.clip(a @ b / norm, -1.0, 1.0))


ZERO_ROW_TOL = 1e-12


def zero_rows(matrix: DenseMatrix, rel_tol: float = ZERO_ROW_TOL) -> NDArray[np.bool_]:
    """Flag rows whose norm is at most ``rel_tol`` times the largest row norm."""
    norms = np.linalg.norm(matrix, axis=1)
    return norms <= rel_tol * norms.max(initial=0.0)
