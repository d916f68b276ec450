"""
Utility functions for numerics and file I/O.
"""

from .normal import log_cdf, log_sf, log_pdf, inverse_mills, probit_quantile
from .param_files import load_params, write_params, format_params, load_experiment_config

__all__ = [
    "log_cdf",
    "log_sf",
    "log_pdf",
    "inverse_mills",
    "probit_quantile",
    "load_params",
    "write_params",
    "format_params",
    "load_experiment_config",
]
