"""
Models for multi-trial experiments driven from the command line.
"""
from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class ExperimentConfig(BaseModel):
    """
    Parsed experiment file. Unknown keys are rejected.
    """
    model_config = ConfigDict(extra="forbid", frozen=True)

    params: Path = Field(description="Params file holding the generating network")
    trials: int = Field(default=1, ge=1)
    T: int = Field(default=100_000, ge=1, description="Steps per trial")
    schedule_a: float = Field(default=10.0, gt=0)
    schedule_b: float = Field(default=200.0, ge=0)
    theta0: str = Field(default="zeros", description="'zeros' or a params-file path")
    seed: int = Field(default=0, ge=0, description="Trial i uses seed + i")
    snapshot_every: int = Field(default=100, ge=1)
    bound: Optional[float] = Field(default=100.0, description="Projection radius; 'none' disables it")
    workers: int = Field(default=1, ge=1)
    use_initial_state: bool = True
    track: List[str] = Field(default_factory=list, description="Components written to paths.csv, e.g. a12")
    burn_in: int = Field(default=1000, ge=0)

    @field_validator("bound", mode="before")
    @classmethod
    def parse_bound(cls, value):
        if isinstance(value, str) and value.strip().lower() in ("none", ""):
            return None
        return value

    @field_validator("track", mode="before")
    @classmethod
    def split_track(cls, value):
        if isinstance(value, str):
            return [item.strip() for item in value.split(",") if item.strip()]
        return value

    @model_validator(mode="after")
    def check_bound(self) -> "ExperimentConfig":
        if self.bound is not None and self.bound <= 0:
            raise ValueError("bound must be positive or 'none'")
        return self

    def trial_seed(self, trial: int) -> int:
        return self.seed + trial


class MseCurve(BaseModel):
    """MSE_k = (1/N) sum over trials of ||theta_k - theta*||^2 at each checkpoint."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    checkpoints: np.ndarray
    mse: np.ndarray
    n_trials: int = Field(ge=1)

    @field_validator("checkpoints", mode="before")
    @classmethod
    def freeze_checkpoints(cls, value):
        array = np.array(value, dtype=np.int64).ravel()
        array.flags.writeable = False
        return array

    @field_validator("mse", mode="before")
    @classmethod
    def freeze_mse(cls, value):
        array = np.array(value, dtype=float).ravel()
        array.flags.writeable = False
        return array

    @model_validator(mode="after")
    def check_lengths(self) -> "MseCurve":
        if self.checkpoints.size != self.mse.size:
            raise ValueError("checkpoints and mse must have the same length")
        if np.any(self.mse < 0):
            raise ValueError("mse must be non-negative")
        return self
