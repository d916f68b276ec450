"""
Numerical check that, under the extended stationary law, the current state
given the previous one is distributed as the base kernel row.
"""
import logging
from typing import Optional

import numpy as np

from ...core.config import get_settings
from ...core.errors import DegenerateMassError
from ...models.markov_models import Lemma1Report
from ...models.network_models import NetworkParams
from .kernel import build_extended_matrix, build_transition_matrix
from .stationary import stationary_distribution

logger = logging.getLogger(__name__)


def verify_lemma1(
    params: NetworkParams,
    tol: Optional[float] = None,
    stationary: Optional[np.ndarray] = None,
) -> Lemma1Report:
    """
    Compare P{S_t = s_next | S_{t-1} = s} under the extended stationary law
    with the base kernel.

    Args:
        params: Network parameters (n within the extended cap)
        tol: Pass threshold on the max absolute deviation
        stationary: Optional extended distribution to check instead of the solved one

    Returns:
        Lemma1Report
    """
    settings = get_settings()
    tol = settings.LEMMA1_TOL if tol is None else tol

    extended = build_extended_matrix(params)
    base = build_transition_matrix(params).rows
    if stationary is None:
        solved = stationary_distribution(extended)
        pi, residual = solved.pi, solved.residual
    else:
        pi = np.asarray(stationary, dtype=float)
        residual = float(np.max(np.abs(pi @ extended.rows - pi)))

    size = 1 << params.n
    # grid[s_next, s]: mass of (S_t = s_next, S_{t-1} = s)
    grid = pi.reshape(size, size)
    mass = grid.sum(axis=0)
    if mass.min() < settings.DEGENERATE_MASS:
        raise DegenerateMassError(
            f"previous state {int(np.argmin(mass))} has stationary mass {mass.min():.3e}"
        )
    conditional = (grid / mass).T
    deviation = float(np.max(np.abs(conditional - base)))

    report = Lemma1Report(
        n=params.n,
        max_deviation=deviation,
        tol=tol,
        min_conditioning_mass=float(mass.min()),
        stationary_residual=residual,
    )
    logger.info(report.summary())
    return report
