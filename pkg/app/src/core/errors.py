"""
Exception hierarchy shared by every service.
"""
from typing import Optional


class BinnetError(Exception):
    """Base class for all library errors."""


class DimensionError(BinnetError, ValueError):
    """Vector or matrix shapes do not agree."""


class CapacityError(BinnetError):
    """A dense computation was requested above its agent cap."""

    def __init__(self, what: str, n: int, cap: int):
        self.n = n
        self.cap = cap
        self.what = what
        super().__init__(f"{what} supports n <= {cap}, got n = {n}")

    def __reduce__(self):
        return (type(self), (self.what, self.n, self.cap))


class EmptyTrajectoryError(BinnetError, ValueError):
    """A trajectory (or its retained window) has no steps."""


class IterationLimitError(BinnetError):
    """An iterative solver hit max_iter before reaching its tolerance."""

    def __init__(self, max_iter: int, residual: float):
        self.max_iter = max_iter
        self.residual = residual
        super().__init__(
            f"no convergence within {max_iter} iterations (residual {residual:.3e})"
        )

    def __reduce__(self):
        return (type(self), (self.max_iter, self.residual))


class DegenerateMassError(BinnetError):
    """A conditioning state carries (numerically) zero stationary mass."""


class NumericalError(BinnetError):
    """A non-finite value appeared in the score of one agent block."""

    def __init__(self, message: str, block: Optional[int] = None):
        self.block = block
        self.detail = message
        if block is not None:
            message = f"{message} (block {block})"
        super().__init__(message)

    def __reduce__(self):
        return (type(self), (self.detail, self.block))


class ModelMismatchError(BinnetError):
    """A matrix is not the kernel of any model in the family."""

    def __init__(self, message: str, residual: Optional[float] = None):
        self.detail = message
        self.residual = residual
        super().__init__(message)

    def __reduce__(self):
        return (type(self), (self.detail, self.residual))


class StreamUnderflowError(BinnetError):
    """An observation stream yielded fewer than two states."""


class ConfigError(BinnetError):
    """A config or params file could not be parsed or validated."""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        self.detail = message
        location = path or "<config>"
        if line is not None:
            location = f"{location}:{line}"
        super().__init__(f"{location}: {message}")

    def __reduce__(self):
        return (type(self), (self.detail, self.path, self.line))


class TrialError(BinnetError):
    """A single trial of a multi-trial experiment failed."""

    def __init__(self, trial: int, cause: Exception):
        self.trial = trial
        self.cause = cause
        super().__init__(f"trial {trial} failed: {cause}")

    def __reduce__(self):
        return (type(self), (self.trial, self.cause))
