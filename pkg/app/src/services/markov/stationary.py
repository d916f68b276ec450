"""
Stationary distributions of finite row-stochastic kernels.
"""
import logging
from typing import Optional, Tuple, Union

import numpy as np

from ...core.config import get_settings
from ...core.errors import DimensionError, IterationLimitError
from ...models.markov_models import StationaryDist, TransitionMatrix

logger = logging.getLogger(__name__)


def _residual(pi: np.ndarray, rows: np.ndarray) -> float:
    return float(np.max(np.abs(pi @ rows - pi)))


def _direct_solve(rows: np.ndarray) -> np.ndarray:
    dim = rows.shape[0]
    system = rows.T - np.eye(dim)
    system[-1, :] = 1.0
    rhs = np.zeros(dim)
    rhs[-1] = 1.0
    pi = np.linalg.solve(system, rhs)
    pi = np.clip(pi, 0.0, None)
    return pi / pi.sum()


def stationary_distribution(
    P: Union[TransitionMatrix, np.ndarray],
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
) -> StationaryDist:
    """
    Solve pi P = pi.

    Kernels of dimension up to DIRECT_SOLVE_MAX_DIM are solved directly;
    larger ones (or a direct solution missing the tolerance) use power
    iteration from the uniform vector.

    Args:
        P: Row-stochastic kernel
        tol: Target for ||pi P - pi||_inf
        max_iter: Power-iteration limit

    Returns:
        StationaryDist with the achieved residual
    """
    settings = get_settings()
    tol = settings.STATIONARY_TOL if tol is None else tol
    max_iter = settings.STATIONARY_MAX_ITER if max_iter is None else max_iter
    if tol <= 0:
        raise ValueError("tol must be positive")

    rows = P.rows if isinstance(P, TransitionMatrix) else np.asarray(P, dtype=float)
    if rows.ndim != 2 or rows.shape[0] != rows.shape[1]:
        raise DimensionError(f"kernel must be square, got shape {rows.shape}")
    dim = rows.shape[0]

    if dim <= settings.DIRECT_SOLVE_MAX_DIM:
        try:
            pi = _direct_solve(rows)
            residual = _residual(pi, rows)
            if residual <= tol:
                logger.info(f"Stationary distribution (direct, dim {dim}): residual {residual:.1e}")
                return StationaryDist(pi=pi, residual=residual, method="direct")
            logger.debug(f"Direct solve residual {residual:.1e} above tol; falling back to power iteration")
        except np.linalg.LinAlgError as e:
            logger.warning(f"Direct stationary solve failed ({e}); using power iteration")

    pi = np.full(dim, 1.0 / dim)
    residual = np.inf
    for iteration in range(1, max_iter + 1):
        step = pi @ rows
        step /= step.sum()
        residual = float(np.max(np.abs(step - pi)))
        pi = step
        if residual <= tol:
            residual = _residual(pi, rows)
            if residual <= tol:
                logger.info(
                    f"Stationary distribution (power, dim {dim}): {iteration} iterations, residual {residual:.1e}"
                )
                return StationaryDist(pi=pi, residual=residual, method="power", iterations=iteration)
    raise IterationLimitError(max_iter, residual)


def extended_marginals(pi: np.ndarray, n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Laws of the current and of the previous half of an extended distribution."""
    size = 1 << n
    grid = np.asarray(pi, dtype=float).reshape(size, size)
    return grid.sum(axis=1), grid.sum(axis=0)
