import math
from abc import ABC, abstractmethod
from pathlib import Path

import numpy as np
from loguru import logger

from src.model.types import Clustering
from src.tensor.core import DenseTensor, as_tensor

from .errors import content_lines, fail, parse_finite, parse_int
from .hypergraph import hypergraph_to_tensor, read_edge_list

DTENSOR_HEADER = "DTENSOR 1"


def read_tensor(path: str | Path) -> DenseTensor:
    """
    Read a ``DTENSOR v1`` file.

    The format is the header ``DTENSOR 1``, the order ``K``, the ``K``
    dimensions on one line, then one value per line with the last index
    varying fastest.

    Raises:
        DataFormatError: On a malformed header, a wrong value count or a
            non-numeric or non-finite value.
    """
    path = Path(path)
    lines = content_lines(path)
    if not lines or lines[0].strip() != DTENSOR_HEADER:
        raise fail(path, 1, f"expected header {DTENSOR_HEADER!r}")
    if len(lines) < 3:
        raise fail(path, len(lines) + 1, "missing order or dimensions")

    order = parse_int(lines[1].strip(), path, 2)
    if order < 1:
        raise fail(path, 2, f"order must be positive, got {order}")
    tokens = lines[2].split()
    if len(tokens) != order:
        raise fail(path, 3, f"expected {order} dimensions, got {len(tokens)}")
    dims = tuple(parse_int(token, path, 3) for token in tokens)
    if min(dims) < 1:
        raise fail(path, 3, f"dimensions must be positive, got {dims}")

    size = math.prod(dims)
    body = lines[3:]
    if len(body) < size:
        raise fail(path, len(lines) + 1, f"expected {size} values, found {len(body)}")
    if len(body) > size:
        raise fail(path, 4 + size, f"expected {size} values, found {len(body)}")
    values = np.array(
        [parse_finite(text.strip(), path, 4 + i) for i, text in enumerate(body)],
        dtype=np.float64,
    )
    logger.debug(f"Read tensor of shape {dims} from {path}")
    return as_tensor(values.reshape(dims))


def read_clustering(path: str | Path) -> Clustering:
    """
    Read a clustering file.

    Each mode starts with a ``mode k r_k`` line (``k`` counted from 1)
    followed by one 1-based label per line.

    Raises:
        DataFormatError: On an empty file, a malformed header or a label
            outside ``[1, r_k]``.
    """
    path = Path(path)
    lines = content_lines(path)
    if not lines:
        raise fail(path, 1, "empty clustering file")

    labels: list[list[int]] = []
    num_clusters: list[int] = []
    for number, text in enumerate(lines, start=1):
        tokens = text.split()
        if tokens and tokens[0] == "mode":
            if len(tokens) != 3:
                raise fail(path, number, "expected 'mode k r_k'")
            mode, r = parse_int(tokens[1], path, number), parse_int(tokens[2], path, number)
            if mode != len(labels) + 1:
                raise fail(path, number, f"expected mode {len(labels) + 1}, got {mode}")
            if r < 1:
                raise fail(path, number, f"cluster count must be positive, got {r}")
            labels.append([])
            num_clusters.append(r)
            continue
        if not labels:
            raise fail(path, number, "label before the first 'mode' header")
        if len(tokens) != 1:
            raise fail(path, number, "expected one label per line")
        label = parse_int(tokens[0], path, number)
        if not 1 <= label <= num_clusters[-1]:
            raise fail(path, number, f"label {label} outside [1, {num_clusters[-1]}]")
        labels[-1].append(label - 1)

    return Clustering.from_labels(labels, num_clusters)


class TensorSource(ABC):
    """Where an observed tensor comes from."""

    @abstractmethod
    def fetch_tensor(self) -> DenseTensor:
        pass


class DTensorFileSource(TensorSource):
    def __init__(self, file_path: str | Path):
        self.file_path = Path(file_path)

    def fetch_tensor(self) -> DenseTensor:
        return read_tensor(self.file_path)


class HypergraphFileSource(TensorSource):
    """Adjacency tensor of a hypergraph edge-list file."""

    def __init__(
        self, file_path: str | Path, num_nodes: int | None = None, symmetrize: bool = True
    ):
        self.file_path = Path(file_path)
        self.num_nodes = num_nodes
        self.symmetrize = symmetrize

    def fetch_tensor(self) -> DenseTensor:
        edges = read_edge_list(self.file_path, self.num_nodes)
        return hypergraph_to_tensor(edges, self.symmetrize)
