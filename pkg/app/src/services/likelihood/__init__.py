"""
Probit conditional likelihood, score and stationary objective.
"""

from .probit_likelihood import log_g, log_likelihood, score, score_matrix, step_log_g
from .objective import expected_objective, ergodic_objective_estimate, objective_sweep

__all__ = [
    "log_g",
    "log_likelihood",
    "score",
    "score_matrix",
    "step_log_g",
    "expected_objective",
    "ergodic_objective_estimate",
    "objective_sweep",
]
