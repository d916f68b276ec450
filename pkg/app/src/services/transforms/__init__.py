"""
Scale normalisations and identifiability utilities.
"""

from .identifiability import standardize, to_row_stochastic, kernel_distance, recover_from_kernel

__all__ = [
    "standardize",
    "to_row_stochastic",
    "kernel_distance",
    "recover_from_kernel",
]
