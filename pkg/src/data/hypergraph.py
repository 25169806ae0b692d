from itertools import permutations
from pathlib import Path

import numpy as np
from loguru import logger
from pydantic import BaseModel, Field, field_validator, model_validator

from src.tensor.core import DenseTensor

from .errors import content_lines, fail, parse_int


class HypergraphEdgeList(BaseModel):
    """Order-K hyperedges over nodes ``1..num_nodes``."""

    num_nodes: int = Field(description="Number of nodes p.")
    order: int = Field(description="Number of nodes per hyperedge K.")
    edges: list[tuple[int, ...]] = Field(
        default_factory=list, description="Hyperedges as tuples of 1-based node ids."
    )

    @field_validator("num_nodes", "order")
    def check_positive(cls, v):
        if v < 1:
            raise ValueError("Node count and order must be positive.")
        return v

    @model_validator(mode="after")
    def check_edges(self):
        for edge in self.edges:
            if len(edge) != self.order:
                raise ValueError(f"Edge {edge} does not have {self.order} nodes.")
            if min(edge) < 1 or max(edge) > self.num_nodes:
                raise ValueError(f"Edge {edge} has ids outside [1, {self.num_nodes}].")
        return self


def read_edge_list(
    path: str | Path, num_nodes: int | None = None, order: int | None = None
) -> HypergraphEdgeList:
    """
    Read whitespace-separated 1-based node ids, one hyperedge per line.

    Blank lines and text after ``#`` are ignored. The order defaults to the
    length of the first edge and the node count to the largest id.

    Raises:
        DataFormatError: On non-integer ids, inconsistent edge lengths or ids
            outside ``[1, num_nodes]``.
    """
    path = Path(path)
    edges: list[tuple[int, ...]] = []
    for number, text in enumerate(content_lines(path), start=1):
        tokens = text.split("#", 1)[0].split()
        if not tokens:
            continue
        edge = tuple(parse_int(token, path, number) for token in tokens)
        order = order or len(edge)
        if len(edge) != order:
            raise fail(path, number, f"expected {order} node ids, got {len(edge)}")
        if min(edge) < 1 or (num_nodes is not None and max(edge) > num_nodes):
            raise fail(path, number, f"node id outside [1, {num_nodes}] in {edge}")
        edges.append(edge)

    if order is None:
        raise fail(path, 1, "no edges and no order given")
    num_nodes = num_nodes or max((max(edge) for edge in edges), default=1)
    logger.info(f"Read {len(edges)} order-{order} edges over {num_nodes} nodes from {path}")
    return HypergraphEdgeList(num_nodes=num_nodes, order=order, edges=edges)


def hypergraph_to_tensor(edges: HypergraphEdgeList, symmetrize: bool = True) -> DenseTensor:
    """
    Binary adjacency tensor of a hypergraph.

    With ``symmetrize`` every permutation of each edge is set, as for an
    undirected hypergraph; otherwise only the listed index tuple. Repeated
    ids within an edge are stored as given.
    """
    tensor = np.zeros((edges.num_nodes,) * edges.order)
    for edge in edges.edges:
        index = tuple(i - 1 for i in edge)
        for cell in set(permutations(index)) if symmetrize else (index,):
            tensor[cell] = 1.0
    return tensor
