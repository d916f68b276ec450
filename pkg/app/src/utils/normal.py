"""
Standard normal helpers evaluated in log space.

log Phi comes from scipy's log_ndtr, which switches to an asymptotic
expansion in the far left tail, so log Phi(z) stays finite far beyond the
point where Phi(z) underflows.
"""
import numpy as np
from scipy import special

LOG_SQRT_2PI = 0.5 * np.log(2.0 * np.pi)


def log_cdf(z):
    """log Phi(z)."""
    return special.log_ndtr(z)


def log_sf(z):
    """log (1 - Phi(z)) = log Phi(-z)."""
    return special.log_ndtr(-np.asarray(z, dtype=float))


def log_pdf(z):
    z = np.asarray(z, dtype=float)
    return -0.5 * z * z - LOG_SQRT_2PI


def inverse_mills(z):
    """
    lambda(z) = phi(z) / Phi(z).

    Computed as exp(log phi - log Phi), which is finite for every finite z:
    for z -> -inf it behaves like -z, for z -> +inf it decays like phi(z).
    """
    return np.exp(log_pdf(z) - log_cdf(z))


def probit_quantile(p):
    """
    Phi^{-1}(p) via scipy's ndtri (Cephes rational approximations, relative
    error near machine precision over (0, 1)).
    """
    return special.ndtri(p)
