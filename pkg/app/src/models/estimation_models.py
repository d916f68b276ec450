"""
Models for the recursive stochastic-approximation estimator.
"""
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator


class StepSchedule(BaseModel):
    """
    Harmonic step sizes a_t = a / (t + b). For a > 0 and b >= 0 these are
    positive, strictly decreasing, not summable and square summable.
    """
    model_config = ConfigDict(frozen=True)

    kind: Literal["harmonic"] = "harmonic"
    a: float = Field(gt=0, description="Numerator")
    b: float = Field(ge=0, description="Offset")

    def step(self, t: int) -> float:
        if t < 1:
            raise ValueError(f"step index must be >= 1, got {t}")
        return self.a / (t + self.b)

    def partial_sum_lower_bound(self, t: int) -> float:
        """a * log((t + 1 + b) / (1 + b)) <= sum_{k=1..t} a_k."""
        return self.a * float(np.log((t + 1 + self.b) / (1 + self.b)))


class EstimatorState(BaseModel):
    """theta_t together with the step counter and projection bookkeeping."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(ge=2)
    theta: np.ndarray
    t: int = Field(default=1, ge=1)
    schedule: StepSchedule
    bound: Optional[float] = Field(default=None, gt=0)
    truncation_count: int = Field(default=0, ge=0)

    @field_validator("theta", mode="before")
    @classmethod
    def freeze_theta(cls, value):
        array = np.array(value, dtype=float).ravel()
        array.flags.writeable = False
        return array


class EstimationRun(BaseModel):
    """
    Snapshots of theta taken every `snapshot_every` updates plus the final
    estimate. `t` counts applied updates; err_norms is set only when the
    generating parameters are known.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    checkpoints: np.ndarray
    snapshots: np.ndarray
    final_theta: np.ndarray
    updates: int
    truncation_count: int
    seed: Optional[int] = None
    truth: Optional[np.ndarray] = None

    @field_validator("checkpoints", mode="before")
    @classmethod
    def freeze_checkpoints(cls, value):
        array = np.array(value, dtype=np.int64).ravel()
        array.flags.writeable = False
        return array

    @field_validator("snapshots", "final_theta", "truth", mode="before")
    @classmethod
    def freeze_floats(cls, value):
        if value is None:
            return None
        array = np.array(value, dtype=float)
        array.flags.writeable = False
        return array

    @property
    def err_norms(self) -> Optional[np.ndarray]:
        if self.truth is None:
            return None
        return np.linalg.norm(self.snapshots - self.truth, axis=1)

    @property
    def final_error(self) -> Optional[float]:
        if self.truth is None:
            return None
        return float(np.linalg.norm(self.final_theta - self.truth))

    def same_path(self, other: "EstimationRun") -> bool:
        return (
            np.array_equal(self.checkpoints, other.checkpoints)
            and np.array_equal(self.snapshots, other.snapshots)
            and np.array_equal(self.final_theta, other.final_theta)
        )
