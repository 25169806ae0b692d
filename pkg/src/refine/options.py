import math

from pydantic import BaseModel, Field, field_validator


class RefineOptions(BaseModel):
    max_iters: int | None = Field(
        default=None,
        description="Number of sweeps T; defaults to max(10, ceil(log2 p)) for the largest dimension p.",
    )
    stop_on_no_change: bool = Field(
        default=True, description="Stop once a sweep changes no assignment."
    )
    seed: int = Field(default=0, description="Seed for random assignment of degenerate rows.")
    update_modes: list[int] | None = Field(
        default=None, description="Modes updated each sweep; all modes when unset."
    )

    @field_validator("max_iters")
    def check_max_iters(cls, v):
        if v is not None and v < 1:
            raise ValueError("Number of sweeps must be at least 1.")
        return v

    @field_validator("update_modes")
    def check_update_modes(cls, v):
        if v is not None and (not v or min(v) < 0):
            raise ValueError("Update modes must be a nonempty list of mode indices.")
        return v

    def resolve_iterations(self, largest_dim: int) -> int:
        if self.max_iters is not None:
            return self.max_iters
        return max(10, math.ceil(math.log2(max(largest_dim, 2))))
