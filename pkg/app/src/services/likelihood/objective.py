"""
Stationary objective E{sum_i log g_i(S~ | theta_i)} and its ergodic estimate.
"""
import logging
from typing import Iterable, List, Optional, Tuple

import numpy as np

from ...core.config import get_settings
from ...core.errors import CapacityError, DimensionError, EmptyTrajectoryError
from ...models.markov_models import ObjectiveReport, StationaryDist
from ...models.network_models import NetworkParams, Trajectory, state_table
from ...utils.normal import inverse_mills, log_cdf, log_sf
from ..dynamics.parameters import component_index, theta_matrix, vec_params
from ..markov.kernel import build_extended_matrix
from ..markov.stationary import stationary_distribution
from .probit_likelihood import ThetaLike, chain_log_g

logger = logging.getLogger(__name__)


def extended_stationary(generating: NetworkParams) -> StationaryDist:
    settings = get_settings()
    if generating.n > settings.MAX_EXTENDED_AGENTS:
        raise CapacityError("expected objective", generating.n, settings.MAX_EXTENDED_AGENTS)
    return stationary_distribution(build_extended_matrix(generating))


def expected_objective(
    theta: ThetaLike,
    generating: NetworkParams,
    stationary: Optional[StationaryDist] = None,
) -> ObjectiveReport:
    """
    Exact objective and gradient at a candidate theta, with S~ distributed
    by the extended stationary law of the generating parameters.

    Args:
        theta: Candidate parameter vector
        generating: True parameters (n within the extended cap)
        stationary: Precomputed extended stationary law of `generating`

    Returns:
        ObjectiveReport
    """
    n = generating.n
    if stationary is None:
        stationary = extended_stationary(generating)
    blocks = theta_matrix(theta, n)
    size = 1 << n
    if stationary.pi.size != size * size:
        raise DimensionError("stationary distribution does not match the extended chain of n")

    states = state_table(n)
    # weights[s, u]: mass of (current s, previous u)
    weights = stationary.pi.reshape(size, size)
    prev_mass = weights.sum(axis=0)
    fired = weights.T @ states
    quiet = prev_mass[:, None] - fired

    z = blocks[:, n] - states @ blocks[:, :n].T
    value = float(np.sum(fired * log_sf(z) + quiet * log_cdf(z)))

    d_c = quiet * inverse_mills(z) - fired * inverse_mills(-z)
    gradient = np.column_stack([-(d_c.T @ states), d_c.sum(axis=0)])
    return ObjectiveReport(value=value, gradient=gradient.ravel(), stationary_used=stationary)


def ergodic_objective_estimate(
    theta: ThetaLike,
    trajectory: Trajectory,
    burn_in: Optional[int] = None,
) -> float:
    """Time average of sum_i log g_i over the transitions after the burn-in prefix."""
    burn_in = get_settings().BURN_IN if burn_in is None else burn_in
    if burn_in < 0:
        raise ValueError("burn_in must be non-negative")
    kept = len(trajectory) - burn_in
    if kept < 1:
        raise EmptyTrajectoryError(
            f"trajectory of length {len(trajectory)} is not longer than the burn-in of {burn_in}"
        )
    return chain_log_g(theta, trajectory, start=burn_in) / kept


def objective_sweep(
    generating: NetworkParams,
    component: str,
    offsets: Iterable[float],
) -> List[Tuple[str, float, float, float]]:
    """
    Objective along one coordinate of theta around theta*.

    Returns:
        Rows (component, offset, value, grad_norm)
    """
    stationary = extended_stationary(generating)
    truth = vec_params(generating).theta
    index = component_index(component, generating.n)
    rows = []
    for offset in offsets:
        candidate = truth.copy()
        candidate[index] += offset
        report = expected_objective(candidate, generating, stationary=stationary)
        rows.append((component, float(offset), report.value, report.grad_norm))
    logger.info(f"Swept {len(rows)} offsets of {component}")
    return rows
