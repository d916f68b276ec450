"""
Recursive stochastic-approximation estimation of (A, c).
"""

from .sa_estimator import (
    RecursiveEstimator,
    initial_state,
    project,
    sa_step,
    run_estimator,
    run_estimator_on_stream,
)

__all__ = [
    "RecursiveEstimator",
    "initial_state",
    "project",
    "sa_step",
    "run_estimator",
    "run_estimator_on_stream",
]
