"""
Kernel-preserving rescalings of (A, c, sigma) and inversion of the kernel.

Row i of (A, c) together with sigma_i may be multiplied by any d_i > 0
without changing the transition kernel, so (A, c) is identifiable only in
the sigma = 1 form.
"""
import logging
from typing import Optional

import numpy as np

from ...core.config import get_settings
from ...core.errors import DimensionError, ModelMismatchError
from ...models.markov_models import TransitionMatrix
from ...models.network_models import NetworkParams, state_table
from ...utils.normal import probit_quantile
from ..dynamics.parameters import canonical_matrix
from ..markov.kernel import build_transition_matrix

logger = logging.getLogger(__name__)


def standardize(params: NetworkParams) -> NetworkParams:
    """Divide (A_i, c_i) by sigma_i and set sigma to ones."""
    if params.is_standard:
        return params
    blocks = canonical_matrix(params)
    return NetworkParams.from_arrays(blocks[:, :params.n], blocks[:, params.n])


def to_row_stochastic(params: NetworkParams) -> NetworkParams:
    """(B^-1 A, B^-1 c, sigma / a) with B = diag(a), a_i = |A_i| 1."""
    scale = np.abs(params.weights).sum(axis=1)
    return NetworkParams.from_arrays(
        params.weights / scale[:, None],
        params.thresholds / scale,
        params.noise_std / scale,
    )


def kernel_distance(p1: NetworkParams, p2: NetworkParams) -> float:
    """Max absolute entrywise difference of the two base kernels."""
    if p1.n != p2.n:
        raise DimensionError(f"cannot compare kernels of n = {p1.n} and n = {p2.n}")
    return float(np.max(np.abs(build_transition_matrix(p1).rows - build_transition_matrix(p2).rows)))


def _query_states(n: int) -> np.ndarray:
    """Bitmasks 0, e_j and e_j + e_{j+1} (cyclically) used as previous states."""
    singles = [1 << j for j in range(n)]
    pairs = [(1 << j) | (1 << ((j + 1) % n)) for j in range(n)]
    return np.array([0] + singles + pairs, dtype=np.int64)


def recover_from_kernel(P: TransitionMatrix, n: int, tol: Optional[float] = None) -> NetworkParams:
    """
    Recover sigma = 1 parameters from a base kernel.

    For each queried previous state u the marginal P{S_{1,i} = 0 | S_0 = u}
    equals Phi(c_i - A_i u), so Phi^{-1} of the marginal gives c_i - A_i u.
    The queries 0, e_j and e_j + e_{j+1} give an overdetermined linear system
    per agent, solved by least squares. The recovered parameters are
    accepted only if their kernel reproduces P within tol.

    Args:
        P: Base transition matrix
        n: Agent count
        tol: Max kernel distance accepted for the recovered parameters

    Returns:
        NetworkParams with sigma = 1
    """
    tol = get_settings().RECOVERY_TOL if tol is None else tol
    if P.kind != "base" or P.n != n:
        raise DimensionError(f"expected a base kernel for n = {n}, got {P.kind} kernel for n = {P.n}")

    states = state_table(n)
    queries = _query_states(n)
    # quiet[k, i] = P{S_{1,i} = 0 | S_0 = queries[k]}
    quiet = P.rows[queries] @ (1.0 - states)
    if np.any(quiet <= 0.0) or np.any(quiet >= 1.0):
        raise ModelMismatchError("kernel marginals leave the open interval (0, 1)")
    gaps = probit_quantile(quiet)

    # gap_i(u) = c_i - A_i u  ->  [-u, 1] @ (A_i, c_i)
    design = np.column_stack([-states[queries], np.ones(queries.size)])
    solution, _, rank, _ = np.linalg.lstsq(design, gaps, rcond=None)
    if rank < n + 1:
        raise ModelMismatchError(f"query system is rank deficient (rank {rank})")
    blocks = solution.T

    try:
        recovered = NetworkParams.from_arrays(blocks[:, :n], blocks[:, n])
    except ValueError as e:
        raise ModelMismatchError(f"recovered parameters are invalid: {e}") from e

    residual = float(np.max(np.abs(build_transition_matrix(recovered).rows - P.rows)))
    if residual > tol:
        raise ModelMismatchError(
            f"kernel is not reproduced by any model parameters (residual {residual:.3e})",
            residual=residual,
        )
    logger.info(f"Recovered parameters for n = {n} (kernel residual {residual:.1e})")
    return recovered
