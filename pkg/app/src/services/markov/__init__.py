"""
Exact finite-state Markov machinery for the observation chain.
"""

from .kernel import (
    transition_probability,
    log_transition_matrix,
    build_transition_matrix,
    build_extended_matrix,
)
from .stationary import stationary_distribution, extended_marginals
from .lemma import verify_lemma1

__all__ = [
    "transition_probability",
    "log_transition_matrix",
    "build_transition_matrix",
    "build_extended_matrix",
    "stationary_distribution",
    "extended_marginals",
    "verify_lemma1",
]
