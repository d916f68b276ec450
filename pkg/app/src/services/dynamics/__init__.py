"""
Quantized network dynamics: Y_t = A S_{t-1} + D_t, S_t = Q(Y_t, c).
"""

from .parameters import vec_params, unvec_params, canonical_matrix, component_names, component_index
from .simulator import make_rng, quantize, step_dynamics, simulate_trajectory, visit_counts

__all__ = [
    "vec_params",
    "unvec_params",
    "canonical_matrix",
    "component_names",
    "component_index",
    "make_rng",
    "quantize",
    "step_dynamics",
    "simulate_trajectory",
    "visit_counts",
]
