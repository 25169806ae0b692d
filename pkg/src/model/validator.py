import numpy as np
from loguru import logger
from pydantic import BaseModel, Field, field_validator, model_validator

from src.tensor.core import matricize

from .params import angle_gap, degree_sums
from .types import DtbmParams


class ParameterSpace(BaseModel):
    """Constants of the dTBM parameter space and the checks' tolerances."""

    c1: float = Field(default=0.3, description="Lower cluster-size factor, |z^-1(a)| >= c1 p / r.")
    c2: float = Field(default=3.0, description="Upper cluster-size factor, |z^-1(a)| <= c2 p / r.")
    c3: float = Field(default=0.01, description="Lower bound on core unfolding row norms.")
    c4: float = Field(default=40.0, description="Upper bound on core unfolding row norms.")
    balance_ratio: float = Field(
        default=1.5,
        description="Largest allowed ratio between the largest and smallest per-cluster degree norms.",
    )
    normalization_tol: float = Field(default=1e-10, description="Tolerance of the l1 degree normalization.")
    gap_tol: float = Field(default=1e-12, description="Angle gaps at or below this count as zero.")

    @field_validator("c1", "c2", "c3", "c4", "balance_ratio")
    def check_positive(cls, v):
        if v <= 0:
            raise ValueError("Parameter-space constants must be positive.")
        return v

    @model_validator(mode="after")
    def check_ordering(self):
        if self.c1 > self.c2 or self.c3 > self.c4:
            raise ValueError("Parameter-space bounds must satisfy c1 <= c2 and c3 <= c4.")
        return self


class ValidationReport(BaseModel):
    """Pass/fail per parameter-space condition, with a message for each failure."""

    checks: dict[str, bool] = Field(default_factory=dict)
    messages: dict[str, str] = Field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def record(self, name: str, ok: bool, message: str = "") -> None:
        self.checks[name] = self.checks.get(name, True) and ok
        if not ok:
            self.messages[name] = message


class ParamsValidator:
    """Check ground-truth parameters against the parameter space.

    Validation never raises and never changes the parameters; callers decide
    whether to proceed.
    """

    def __init__(self, space: ParameterSpace | None = None) -> None:
        self.space = space or ParameterSpace()

    def validate(self, params: DtbmParams, log_failures: bool = True) -> ValidationReport:
        report = ValidationReport()
        for mode in range(params.order):
            self._check_degrees(params, mode, report)
            self._check_sizes(params, mode, report)
            self._check_core_rows(params, mode, report)
            self._check_balance(params, mode, report)
            gap = angle_gap(params.core, mode)
            report.record(
                "angle_gap",
                gap > self.space.gap_tol,
                f"mode {mode} has angle gap {gap:.3g}",
            )
        if log_failures:
            for name, message in report.messages.items():
                logger.warning(f"Parameter check '{name}' failed: {message}")
        return report

    def _check_degrees(self, params: DtbmParams, mode: int, report: ValidationReport) -> None:
        theta = params.theta[mode]
        report.record(
            "positive_degrees",
            bool(np.all(theta > 0)),
            f"mode {mode} has nonpositive degrees",
        )
        sizes = params.z.sizes(mode)
        sums = degree_sums(params, mode)
        tol = self.space.normalization_tol * np.maximum(sizes, 1)
        report.record(
            "degree_normalization",
            bool(np.all(np.abs(sums - sizes) <= tol)),
            f"mode {mode} degree sums {sums.round(6).tolist()} differ from sizes {sizes.tolist()}",
        )

    def _check_sizes(self, params: DtbmParams, mode: int, report: ValidationReport) -> None:
        p, r = params.dims[mode], params.z.num_clusters[mode]
        sizes = params.z.sizes(mode)
        low, high = self.space.c1 * p / r, self.space.c2 * p / r
        report.record(
            "cluster_sizes",
            bool(np.all((sizes >= low) & (sizes <= high))),
            f"mode {mode} cluster sizes {sizes.tolist()} outside [{low:.2f}, {high:.2f}]",
        )

    def _check_core_rows(self, params: DtbmParams, mode: int, report: ValidationReport) -> None:
        norms = np.linalg.norm(matricize(params.core, mode), axis=1)
        report.record(
            "core_row_norms",
            bool(np.all((norms >= self.space.c3) & (norms <= self.space.c4))),
            f"mode {mode} core row norms {norms.round(4).tolist()} outside "
            f"[{self.space.c3}, {self.space.c4}]",
        )

    def _check_balance(self, params: DtbmParams, mode: int, report: ValidationReport) -> None:
        theta, labels = params.theta[mode], params.z.assignments[mode]
        norms = np.sqrt(
            np.bincount(labels, weights=theta**2, minlength=params.z.num_clusters[mode])
        )
        norms = norms[norms > 0]
        ratio = norms.max() / norms.min() if norms.size else np.inf
        report.record(
            "degree_balance",
            bool(ratio <= self.space.balance_ratio),
            f"mode {mode} per-cluster degree norm ratio {ratio:.3f} exceeds "
            f"{self.space.balance_ratio}",
        )


def validate(params: DtbmParams, space: ParameterSpace | None = None) -> ValidationReport:
    return ParamsValidator(space).validate(params)
