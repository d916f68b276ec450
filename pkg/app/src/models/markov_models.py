"""
Models produced by the exact Markov-chain and likelihood computations.
"""
from typing import Dict, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def _frozen_array(value, copy: bool = True) -> np.ndarray:
    # copy=False freezes a float array in place; callers must own it
    array = np.array(value, dtype=float) if copy else np.asarray(value, dtype=float)
    array.flags.writeable = False
    return array


class TransitionMatrix(BaseModel):
    """
    Dense row-stochastic kernel; entry (u, s) = P(u -> s).
    kind "base" is indexed by bitmasks of {0,1}^n, kind "extended" by
    current * 2**n + previous over {0,1}^{2n}.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(ge=1)
    kind: Literal["base", "extended"]
    rows: np.ndarray

    @field_validator("rows", mode="before")
    @classmethod
    def freeze_rows(cls, value):
        return _frozen_array(value, copy=False)

    @model_validator(mode="after")
    def check_shape(self) -> "TransitionMatrix":
        dim = 1 << (self.n if self.kind == "base" else 2 * self.n)
        if self.rows.shape != (dim, dim):
            raise ValueError(f"{self.kind} kernel for n = {self.n} must be {dim}x{dim}, got {self.rows.shape}")
        return self

    @property
    def dim(self) -> int:
        return self.rows.shape[0]

    def row_sum_deviation(self) -> float:
        return float(np.max(np.abs(self.rows.sum(axis=1) - 1.0)))

    def min_entry(self) -> float:
        return float(self.rows.min())


class StationaryDist(BaseModel):
    """Probability vector pi with pi P = pi, plus the achieved residual."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    pi: np.ndarray
    residual: float
    method: Literal["direct", "power"] = "power"
    iterations: int = 0

    @field_validator("pi", mode="before")
    @classmethod
    def freeze_pi(cls, value):
        return _frozen_array(value)


class Lemma1Report(BaseModel):
    """
    Outcome of comparing the conditional law of the current half of the
    extended stationary distribution (given the previous half) with the base kernel.
    """
    n: int
    max_deviation: float
    tol: float
    min_conditioning_mass: float
    stationary_residual: float

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tol

    def summary(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (
            f"lemma1 {verdict}: n={self.n} max_deviation={self.max_deviation:.3e} "
            f"tol={self.tol:.1e}"
        )

    def key_values(self) -> Dict[str, str]:
        return {
            "passed": str(self.passed).lower(),
            "n": str(self.n),
            "max_deviation": repr(self.max_deviation),
            "tol": repr(self.tol),
            "min_conditioning_mass": repr(self.min_conditioning_mass),
            "stationary_residual": repr(self.stationary_residual),
        }

    def to_text(self) -> str:
        lines = [self.summary()]
        lines.extend(f"{key}={value}" for key, value in self.key_values().items())
        return "\n".join(lines) + "\n"


class Score(BaseModel):
    """Gradient of sum_i log g_i; block i ordered (d/da_i1, ..., d/da_in, d/dc_i)."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    k: np.ndarray

    @field_validator("k", mode="before")
    @classmethod
    def freeze_k(cls, value):
        return _frozen_array(value)

    def block(self, i: int) -> np.ndarray:
        width = self.n + 1
        return self.k[i * width:(i + 1) * width]


class ObjectiveReport(BaseModel):
    """Exact stationary expectation of sum_i log g_i at a candidate theta."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    value: float
    gradient: np.ndarray
    stationary_used: StationaryDist

    @field_validator("gradient", mode="before")
    @classmethod
    def freeze_gradient(cls, value):
        return _frozen_array(value)

    @property
    def grad_norm(self) -> float:
        return float(np.linalg.norm(self.gradient))
