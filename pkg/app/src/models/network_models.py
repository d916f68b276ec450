"""
Domain models for the binary-valued network dynamics.

Bitmask convention: bit i-1 of a state's integer encoding holds s_i, so
agent 1 is the least significant bit. An extended state (S_t, S_{t-1}) is
flattened as current * 2**n + previous.
"""
from typing import Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def bits_to_array(bits: int, n: int) -> np.ndarray:
    """Decode a bitmask into a 0/1 float vector of length n."""
    return ((int(bits) >> np.arange(n)) & 1).astype(float)


def array_to_bits(s: Sequence[float]) -> int:
    """Encode a 0/1 vector into its bitmask."""
    values = np.asarray(s)
    return int(np.dot((values > 0).astype(np.int64), 1 << np.arange(values.size, dtype=np.int64)))


def state_table(n: int) -> np.ndarray:
    """All 2**n states as rows of a (2**n, n) 0/1 matrix, row index = bitmask."""
    codes = np.arange(1 << n, dtype=np.int64)[:, None]
    return ((codes >> np.arange(n)) & 1).astype(float)


class NetworkParams(BaseModel):
    """
    Weight matrix A, thresholds c and per-agent noise standard deviations.
    """
    model_config = ConfigDict(frozen=True)

    n: int = Field(ge=2, description="Number of agents")
    A: Tuple[Tuple[float, ...], ...] = Field(description="Weight matrix, row i holds the weights agent i gives")
    c: Tuple[float, ...] = Field(description="Quantizer thresholds")
    sigma: Tuple[float, ...] = Field(default=(), description="Noise standard deviations (default all 1)")

    @model_validator(mode="before")
    @classmethod
    def default_sigma(cls, data):
        if isinstance(data, dict) and data.get("sigma") is None and data.get("c") is not None:
            data = {**data, "sigma": (1.0,) * len(data["c"])}
        return data

    @model_validator(mode="after")
    def check_invariants(self) -> "NetworkParams":
        n = self.n
        if len(self.A) != n or any(len(row) != n for row in self.A):
            raise ValueError(f"A must be {n}x{n}")
        if len(self.c) != n:
            raise ValueError(f"c must have length {n}, got {len(self.c)}")
        if len(self.sigma) != n:
            raise ValueError(f"sigma must have length {n}, got {len(self.sigma)}")
        if not all(s > 0 and np.isfinite(s) for s in self.sigma):
            raise ValueError("all sigma entries must be strictly positive")
        values = np.asarray(self.A, dtype=float)
        if not np.all(np.isfinite(values)) or not np.all(np.isfinite(self.c)):
            raise ValueError("A and c must be finite")
        row_sums = np.abs(values).sum(axis=1)
        if np.any(row_sums <= 0):
            bad = int(np.argmin(row_sums)) + 1
            raise ValueError(f"row {bad} of |A| has zero sum")
        return self

    @classmethod
    def from_arrays(cls, A, c, sigma=None) -> "NetworkParams":
        weights = np.asarray(A, dtype=float)
        if weights.ndim != 2:
            raise ValueError("A must be a matrix")
        return cls(
            n=weights.shape[0],
            A=tuple(tuple(float(v) for v in row) for row in weights),
            c=tuple(float(v) for v in np.asarray(c, dtype=float).ravel()),
            sigma=None if sigma is None else tuple(float(v) for v in np.asarray(sigma, dtype=float).ravel()),
        )

    @property
    def weights(self) -> np.ndarray:
        return np.asarray(self.A, dtype=float)

    @property
    def thresholds(self) -> np.ndarray:
        return np.asarray(self.c, dtype=float)

    @property
    def noise_std(self) -> np.ndarray:
        return np.asarray(self.sigma, dtype=float)

    @property
    def is_standard(self) -> bool:
        return all(s == 1.0 for s in self.sigma)


class ParamVector(BaseModel):
    """
    theta = vec{(A c)}: blocks (a_i1, ..., a_in, c_i) concatenated in agent order.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(ge=2)
    theta: np.ndarray

    @field_validator("theta", mode="before")
    @classmethod
    def freeze_theta(cls, value):
        array = np.array(value, dtype=float).ravel()
        array.flags.writeable = False
        return array

    @model_validator(mode="after")
    def check_length(self) -> "ParamVector":
        expected = self.n * (self.n + 1)
        if self.theta.size != expected:
            raise ValueError(f"theta must have length {expected}, got {self.theta.size}")
        return self

    def block(self, i: int) -> np.ndarray:
        """Block of agent i (0-based)."""
        width = self.n + 1
        return self.theta[i * width:(i + 1) * width]

    def __eq__(self, other) -> bool:
        if not isinstance(other, ParamVector):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.theta, other.theta)


class StateVec(BaseModel):
    """A point of {0,1}^n encoded as a bitmask."""
    model_config = ConfigDict(frozen=True)

    bits: int = Field(ge=0)
    n: int = Field(ge=1)

    @model_validator(mode="after")
    def check_width(self) -> "StateVec":
        if self.bits >= 1 << self.n:
            raise ValueError(f"bitmask {self.bits} does not fit in {self.n} bits")
        return self

    @classmethod
    def from_bits(cls, s: Sequence[int]) -> "StateVec":
        return cls(bits=array_to_bits(s), n=len(s))

    @classmethod
    def zeros(cls, n: int) -> "StateVec":
        return cls(bits=0, n=n)

    def to_array(self) -> np.ndarray:
        return bits_to_array(self.bits, self.n)

    def bit(self, i: int) -> int:
        """Bit of agent i (0-based)."""
        return (self.bits >> i) & 1


class ExtState(BaseModel):
    """The pair (S_t, S_{t-1}) on {0,1}^{2n}."""
    model_config = ConfigDict(frozen=True)

    current: StateVec
    previous: StateVec

    @model_validator(mode="after")
    def check_widths(self) -> "ExtState":
        if self.current.n != self.previous.n:
            raise ValueError("current and previous states must have the same width")
        return self

    @property
    def n(self) -> int:
        return self.current.n

    @property
    def index(self) -> int:
        return (self.current.bits << self.n) | self.previous.bits

    @classmethod
    def from_index(cls, index: int, n: int) -> "ExtState":
        if not 0 <= index < 1 << (2 * n):
            raise ValueError(f"extended index {index} out of range for n = {n}")
        mask = (1 << n) - 1
        return cls(current=StateVec(bits=index >> n, n=n), previous=StateVec(bits=index & mask, n=n))


class Trajectory(BaseModel):
    """
    Record of a simulated chain: S_0, the observations S_1..S_T as bitmasks
    and the seed that produced them.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(ge=1)
    initial: StateVec
    observations: np.ndarray
    seed: Optional[int] = None

    @field_validator("observations", mode="before")
    @classmethod
    def freeze_observations(cls, value):
        array = np.array(value, dtype=np.int64).ravel()
        array.flags.writeable = False
        return array

    @model_validator(mode="after")
    def check_states(self) -> "Trajectory":
        if self.initial.n != self.n:
            raise ValueError("initial state width differs from n")
        if self.observations.size and (
            self.observations.min() < 0 or self.observations.max() >= 1 << self.n
        ):
            raise ValueError(f"observations must be bitmasks of width {self.n}")
        return self

    def __len__(self) -> int:
        return int(self.observations.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trajectory):
            return NotImplemented
        return (
            self.n == other.n
            and self.initial == other.initial
            and self.seed == other.seed
            and np.array_equal(self.observations, other.observations)
        )

    def chain(self) -> np.ndarray:
        """S_0, S_1, ..., S_T as one bitmask array."""
        return np.concatenate(([self.initial.bits], self.observations)).astype(np.int64)

    def states(self) -> list:
        return [StateVec(bits=int(b), n=self.n) for b in self.observations]
