from pathlib import Path

from loguru import logger

from src.model.types import Clustering
from src.tensor.core import DenseTensor

from .source import DTENSOR_HEADER


def write_tensor(tensor: DenseTensor, path: str | Path) -> None:
    """Write ``tensor`` as ``DTENSOR v1``; ``repr`` keeps every double exact."""
    if tensor.ndim < 1:
        logger.error("Cannot write a zero-order tensor")
        raise ValueError("Cannot write a zero-order tensor")
    path = Path(path)
    lines = [DTENSOR_HEADER, str(tensor.ndim), " ".join(str(d) for d in tensor.shape)]
    lines.extend(repr(float(value)) for value in tensor.ravel(order="C"))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.debug(f"Wrote tensor of shape {tensor.shape} to {path}")


def write_clustering(z: Clustering, path: str | Path) -> None:
    """Write one ``mode k r_k`` section per mode with 1-based labels."""
    path = Path(path)
    lines = []
    for mode, (labels, r) in enumerate(zip(z.assignments, z.num_clusters), start=1):
        lines.append(f"mode {mode} {r}")
        lines.extend(str(int(label) + 1) for label in labels)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.debug(f"Wrote clustering of dims {z.dims} to {path}")
