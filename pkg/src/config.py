from pathlib import Path

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from src.initialize.factory import DenoiserFactory
from src.initialize.kmeans import KMeansOptions
from src.methods.factory import MethodFactory
from src.refine.options import RefineOptions
from src.simgen.degrees.factory import DegreeFamilyFactory


class SimSpec(BaseModel):
    """One simulated dTBM instance."""

    p: int = Field(default=50, description="Dimension of every mode.")
    K: int = Field(default=3, description="Tensor order.")
    r: int = Field(default=3, description="Clusters per mode.")
    gamma: float = Field(default=-1.2, description="Signal exponent, SNR = p^gamma.")
    sigma: float = Field(
        default=1.0,
        description="Gaussian noise scale; Bernoulli data always uses sigma^2 = 1/4.",
    )
    observation: str = Field(default="gaussian", description="Observation model.")
    degree_family: str = Field(default="abs_normal", description="Degree distribution.")
    shape: float | None = Field(default=None, description="Pareto shape parameter a > 1.")
    symmetric: bool = Field(
        default=False,
        description="Share one clustering and one degree vector across all modes.",
    )
    core_row_norm: float = Field(
        default=32.0, description="Norm of every core unfolding row for Gaussian data."
    )
    bernoulli_peak: float = Field(
        default=0.5, description="Superdiagonal core value s1 for Bernoulli data."
    )
    seed: int = Field(default=0, description="Seed of the generator.")

    @field_validator("p", "K", "r")
    def check_sizes(cls, v):
        if v < 1:
            raise ValueError("Sizes must be positive.")
        return v

    @field_validator("sigma")
    def check_sigma(cls, v):
        if v < 0:
            raise ValueError("Noise scale must be nonnegative.")
        return v

    @field_validator("observation")
    def check_observation(cls, v):
        if v not in DenoiserFactory.get_registered_types():
            raise ValueError("Invalid observation model.")
        return v

    @field_validator("degree_family")
    def check_degree_family(cls, v):
        if v not in DegreeFamilyFactory.get_registered_types():
            raise ValueError("Invalid degree family.")
        return v

    @field_validator("core_row_norm")
    def check_core_row_norm(cls, v):
        if v <= 0:
            raise ValueError("Core row norm must be positive.")
        return v

    @field_validator("bernoulli_peak")
    def check_bernoulli_peak(cls, v):
        if not 0 < v <= 1:
            raise ValueError("Bernoulli peak must lie in (0, 1].")
        return v

    @model_validator(mode="after")
    def check_consistency(self):
        if self.r > self.p:
            raise ValueError("Need p >= r.")
        if self.degree_family == "pareto" and (self.shape is None or self.shape <= 1):
            raise ValueError("Pareto degrees need a shape a > 1.")
        return self

    def degree_kwargs(self) -> dict:
        return {"shape": self.shape} if self.degree_family == "pareto" else {}


class GammaGrid(BaseModel):
    """Inclusive arithmetic grid of signal exponents."""

    start: float = Field(description="First exponent.")
    stop: float = Field(description="Last exponent, included when on the grid.")
    step: float = Field(default=0.1, description="Grid spacing.")

    @field_validator("step")
    def check_step(cls, v):
        if v <= 0:
            raise ValueError("Grid step must be positive.")
        return v

    @model_validator(mode="after")
    def check_range(self):
        if self.stop < self.start:
            raise ValueError("Grid stop must not precede start.")
        return self

    def values(self) -> list[float]:
        count = int(np.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [round(self.start + i * self.step, 10) for i in range(count)]


class ExperimentConfig(BaseModel):
    """Monte-Carlo grid run by the sweep command."""

    p: list[int] = Field(default=[80], description="Dimensions to sweep.")
    K: list[int] = Field(default=[3], description="Tensor orders to sweep.")
    r: list[int] = Field(default=[5], description="Cluster numbers to sweep.")
    gamma: list[float] | GammaGrid = Field(
        default=GammaGrid(start=-2.1, stop=-1.4, step=0.1),
        description="Signal exponents, as a list or a (start, stop, step) grid.",
    )
    observation: list[str] = Field(default=["gaussian"], description="Observation models.")
    degree_family: list[str] = Field(default=["abs_normal"], description="Degree families.")
    shape: list[float] = Field(
        default=[2.0], description="Pareto shapes; used only with the pareto family."
    )
    sigma: float = Field(default=1.0, description="Gaussian noise scale.")
    core_row_norm: float = Field(default=32.0, description="Gaussian core row norm.")
    bernoulli_peak: float = Field(default=0.5, description="Bernoulli superdiagonal value.")
    symmetric: bool = Field(default=False, description="Symmetric simulated instances.")
    replicates: int = Field(default=30, description="Replicates per grid cell.")
    base_seed: int = Field(default=0, description="Seed all replicate seeds derive from.")
    methods: list[str] = Field(
        default=["dtbm_init", "dtbm_full"], description="Methods to compare."
    )
    refine: RefineOptions = Field(default_factory=RefineOptions)
    kmeans: KMeansOptions = Field(default_factory=KMeansOptions)
    output: Path = Field(default=Path("sweep.csv"), description="Per-replicate table.")
    aggregate_output: Path | None = Field(
        default=None, description="Aggregate table; derived from output when omitted."
    )
    jobs: int = Field(default=1, description="Worker processes.")

    @field_validator("p", "K", "r", "observation", "degree_family", "methods")
    def check_nonempty(cls, v):
        if not v:
            raise ValueError("Grid axes must not be empty.")
        return v

    @field_validator("gamma")
    def check_gamma(cls, v):
        if isinstance(v, list) and not v:
            raise ValueError("Gamma grid must not be empty.")
        return v

    @field_validator("observation")
    def check_observation(cls, v):
        if set(v) - set(DenoiserFactory.get_registered_types()):
            raise ValueError("Invalid observation model.")
        return v

    @field_validator("degree_family")
    def check_degree_family(cls, v):
        if set(v) - set(DegreeFamilyFactory.get_registered_types()):
            raise ValueError("Invalid degree family.")
        return v

    @field_validator("methods")
    def check_methods(cls, v):
        if set(v) - set(MethodFactory.get_registered_types()):
            raise ValueError("Invalid method.")
        return v

    @field_validator("replicates", "jobs")
    def check_positive(cls, v):
        if v < 1:
            raise ValueError("Replicates and jobs must be at least 1.")
        return v

    def gamma_values(self) -> list[float]:
        return self.gamma.values() if isinstance(self.gamma, GammaGrid) else list(self.gamma)

    def aggregate_path(self) -> Path:
        if self.aggregate_output is not None:
            return self.aggregate_output
        return self.output.with_name(f"{self.output.stem}_aggregate.csv")
