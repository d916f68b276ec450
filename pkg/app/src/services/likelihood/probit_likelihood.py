"""
Per-agent conditional likelihood of one transition,

    g_i(x~ | theta_i) = (1 - Phi(z))^{x~_i} Phi(z)^{1 - x~_i},  z = c_i - A_i x,

where x is the previous state and x~_i is agent i's current bit, and its
gradient with respect to theta_i = (A_i, c_i).

With lambda(z) = phi(z) / Phi(z):
    d log g_i / d c_i  = (1 - x~_i) lambda(z) - x~_i lambda(-z)
    d log g_i / d a_ij = -x_j * d log g_i / d c_i
"""
from typing import Union

import numpy as np

from ...core.errors import DimensionError, EmptyTrajectoryError
from ...models.markov_models import Score
from ...models.network_models import ExtState, ParamVector, Trajectory
from ...utils.normal import inverse_mills, log_cdf, log_sf
from ..dynamics.parameters import theta_matrix

ThetaLike = Union[ParamVector, np.ndarray]

# transitions per vectorised chunk
_CHUNK = 1 << 16


def log_g(theta_i: np.ndarray, xt: ExtState, i: int) -> float:
    """
    log g_i for one agent.

    Args:
        theta_i: Block (a_i1, ..., a_in, c_i)
        xt: Extended state (current, previous)
        i: Agent index (0-based)
    """
    n = xt.n
    block = np.asarray(theta_i, dtype=float).ravel()
    if block.size != n + 1:
        raise DimensionError(f"theta block must have length {n + 1}, got {block.size}")
    if not 0 <= i < n:
        raise DimensionError(f"agent index {i} out of range for n = {n}")
    z = block[n] - block[:n] @ xt.previous.to_array()
    return float(log_sf(z) if xt.current.bit(i) else log_cdf(z))


def step_log_g(blocks: np.ndarray, previous: np.ndarray, current: np.ndarray) -> np.ndarray:
    """
    sum_i log g_i for a batch of transitions.

    Args:
        blocks: theta as (n, n+1)
        previous: (m, n) 0/1 rows of S_{t-1}
        current: (m, n) 0/1 rows of S_t

    Returns:
        (m,) array
    """
    n = blocks.shape[0]
    z = blocks[:, n] - previous @ blocks[:, :n].T
    return np.where(current > 0, log_sf(z), log_cdf(z)).sum(axis=1)


def score_matrix(blocks: np.ndarray, previous: np.ndarray, current: np.ndarray) -> np.ndarray:
    """Gradient of sum_i log g_i for one transition as an (n, n+1) array."""
    n = blocks.shape[0]
    z = blocks[:, n] - blocks[:, :n] @ previous
    d_c = np.where(current > 0, -inverse_mills(-z), inverse_mills(z))
    return np.column_stack([-np.outer(d_c, previous), d_c])


def score(theta: ThetaLike, xt: ExtState) -> Score:
    n = xt.n
    blocks = theta_matrix(theta, n)
    k = score_matrix(blocks, xt.previous.to_array(), xt.current.to_array())
    return Score(n=n, k=k.ravel())


def _unpack(bits: np.ndarray, n: int) -> np.ndarray:
    return ((bits[:, None] >> np.arange(n)) & 1).astype(float)


def chain_log_g(theta: ThetaLike, trajectory: Trajectory, start: int = 0) -> float:
    """sum over transitions t > start of sum_i log g_i (t counted from 1)."""
    n = trajectory.n
    blocks = theta_matrix(theta, n)
    chain = trajectory.chain()
    total = 0.0
    for lo in range(start, len(trajectory), _CHUNK):
        hi = min(lo + _CHUNK, len(trajectory))
        total += float(step_log_g(blocks, _unpack(chain[lo:hi], n), _unpack(chain[lo + 1:hi + 1], n)).sum())
    return total


def log_likelihood(theta: ThetaLike, trajectory: Trajectory) -> float:
    """
    sum_{t=1..T} sum_i log g_i(S~_t | theta_i).

    The log P{S_0 = s_0} term is left out: the law of S_0 is unknown at
    estimation time and the term does not grow with T.
    """
    if len(trajectory) == 0:
        raise EmptyTrajectoryError("log-likelihood of an empty trajectory")
    return chain_log_g(theta, trajectory)
