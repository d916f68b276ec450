"""
Closed-form transition kernel of the observation chain.

P(u -> s) = prod_i (1 - Phi(z_i))^{s_i} Phi(z_i)^{1 - s_i},  z_i = (c_i - A_i u) / sigma_i,

evaluated as a sum of log-CDF terms and exponentiated once.
"""
import logging

import numpy as np

from ...core.config import get_settings
from ...core.errors import CapacityError, DimensionError, NumericalError
from ...models.markov_models import TransitionMatrix
from ...models.network_models import NetworkParams, StateVec, state_table
from ...utils.normal import log_cdf, log_sf

logger = logging.getLogger(__name__)


def standardized_gaps(params: NetworkParams, previous: np.ndarray) -> np.ndarray:
    """z = (c - A x) / sigma for each row x of `previous`."""
    return (params.thresholds - previous @ params.weights.T) / params.noise_std


def transition_probability(params: NetworkParams, u: StateVec, s: StateVec) -> float:
    if u.n != params.n or s.n != params.n:
        raise DimensionError(f"state widths ({u.n}, {s.n}) do not match n = {params.n}")
    z = standardized_gaps(params, u.to_array())
    fired = s.to_array() > 0
    return float(np.exp(np.sum(np.where(fired, log_sf(z), log_cdf(z)))))


def log_transition_matrix(params: NetworkParams) -> np.ndarray:
    """log P as a dense (2**n, 2**n) array, rows indexed by the previous state."""
    states = state_table(params.n)
    z = standardized_gaps(params, states)
    return log_sf(z) @ states.T + log_cdf(z) @ (1.0 - states).T


def build_transition_matrix(params: NetworkParams) -> TransitionMatrix:
    settings = get_settings()
    if params.n > settings.MAX_BASE_AGENTS:
        raise CapacityError("dense transition matrix", params.n, settings.MAX_BASE_AGENTS)

    rows = np.exp(log_transition_matrix(params))
    if not np.all(np.isfinite(rows)) or rows.min() < 0:
        raise NumericalError("transition matrix has non-finite or negative entries")
    if rows.min() == 0.0:
        logger.warning("Transition matrix entries underflowed to zero; parameters are extreme")

    kernel = TransitionMatrix(n=params.n, kind="base", rows=rows)
    logger.info(
        f"Built {kernel.dim}x{kernel.dim} transition matrix "
        f"(min entry {kernel.min_entry():.3e}, row-sum deviation {kernel.row_sum_deviation():.1e})"
    )
    return kernel


def build_extended_matrix(params: NetworkParams) -> TransitionMatrix:
    """
    Kernel of (S_t, S_{t-1}): entry ((s, u) -> (s_next, s')) equals P(s -> s_next)
    when s' = s and is zero otherwise.
    """
    settings = get_settings()
    if params.n > settings.MAX_EXTENDED_AGENTS:
        raise CapacityError("dense extended transition matrix", params.n, settings.MAX_EXTENDED_AGENTS)

    base = build_transition_matrix(params).rows
    size = base.shape[0]
    rows = np.zeros((size * size, size * size))
    for s in range(size):
        # rows (s, u) for every u, columns (s_next, s)
        rows[s * size:(s + 1) * size, s::size] = base[s]
    return TransitionMatrix(n=params.n, kind="extended", rows=rows)
