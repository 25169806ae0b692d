from pathlib import Path

import numpy as np
from pydantic import BaseModel, Field, model_validator

from src.model.types import Clustering, DtbmParams, FitResult


class CoreDocument(BaseModel):
    shape: list[int] = Field(description="Core dimensions (r_1, ..., r_K).")
    values: list[float] = Field(description="Core entries, last index fastest.")

    @model_validator(mode="after")
    def check_size(self):
        if int(np.prod(self.shape)) != len(self.values):
            raise ValueError("Core values do not match the core shape.")
        return self

    @classmethod
    def from_array(cls, core: np.ndarray) -> "CoreDocument":
        return cls(shape=list(core.shape), values=core.ravel().tolist())

    def to_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.float64).reshape(self.shape)


class ParamsDocument(BaseModel):
    """JSON form of ``DtbmParams``; labels are 1-based."""

    labels: list[list[int]] = Field(description="Per-mode 1-based labels.")
    num_clusters: list[int] = Field(description="Clusters per mode.")
    core: CoreDocument
    theta: list[list[float]] = Field(description="Per-mode degree vectors.")
    sigma: float = Field(default=1.0, description="Noise scale.")

    @classmethod
    def from_params(cls, params: DtbmParams) -> "ParamsDocument":
        return cls(
            labels=[(z + 1).tolist() for z in params.z.assignments],
            num_clusters=list(params.z.num_clusters),
            core=CoreDocument.from_array(params.core),
            theta=[t.tolist() for t in params.theta],
            sigma=params.sigma,
        )

    def to_params(self) -> DtbmParams:
        z = Clustering.from_labels(
            [np.asarray(labels) - 1 for labels in self.labels], self.num_clusters
        )
        return DtbmParams(
            z=z,
            core=self.core.to_array(),
            theta=tuple(np.asarray(t, dtype=np.float64) for t in self.theta),
            sigma=self.sigma,
        )


class ThetaDocument(BaseModel):
    theta: list[list[float]] = Field(description="Per-mode degree estimates.")


class FitDocument(BaseModel):
    """Diagnostics of a fit; indices are 1-based."""

    method: str
    ranks: list[int]
    observation: str
    seed: int
    iterations_run: int
    trace: list[int]
    degenerate_rows: list[list[int]]
    empty_clusters: list[list[int]]
    operation_counts: dict[str, int]

    @classmethod
    def from_fit(
        cls, fit: FitResult, method: str, observation: str, seed: int
    ) -> "FitDocument":
        return cls(
            method=method,
            ranks=list(fit.z_hat.num_clusters),
            observation=observation,
            seed=seed,
            iterations_run=fit.iterations_run,
            trace=list(fit.trace),
            degenerate_rows=[(rows + 1).tolist() for rows in fit.degenerate_rows],
            empty_clusters=[(clusters + 1).tolist() for clusters in fit.empty_clusters],
            operation_counts=dict(fit.operation_counts),
        )


def write_document(document: BaseModel, path: str | Path) -> None:
    Path(path).write_text(document.model_dump_json(indent=2), encoding="utf-8")


def read_params(path: str | Path) -> DtbmParams:
    return ParamsDocument.model_validate_json(Path(path).read_text(encoding="utf-8")).to_params()
