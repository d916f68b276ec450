"""
Flattening between NetworkParams and the estimator's parameter vector.

vec stacks the rows of the n x (n+1) matrix (A c) of the sigma = 1 form:
block i is (a_i1, ..., a_in, c_i).
"""
import re
from typing import List, Union

import numpy as np

from ...core.errors import DimensionError
from ...models.network_models import NetworkParams, ParamVector


def canonical_matrix(params: NetworkParams) -> np.ndarray:
    """(A c) with row i divided by sigma_i."""
    blocks = np.column_stack([params.weights, params.thresholds])
    return blocks / params.noise_std[:, None]


def vec_params(params: NetworkParams) -> ParamVector:
    return ParamVector(n=params.n, theta=canonical_matrix(params).ravel())


def unvec_params(theta: Union[ParamVector, np.ndarray], n: int) -> NetworkParams:
    values = theta.theta if isinstance(theta, ParamVector) else np.asarray(theta, dtype=float).ravel()
    if values.size != n * (n + 1):
        raise DimensionError(f"theta of length {values.size} does not match n = {n} (expected {n * (n + 1)})")
    blocks = values.reshape(n, n + 1)
    return NetworkParams.from_arrays(blocks[:, :n], blocks[:, n])


def theta_matrix(theta: Union[ParamVector, np.ndarray], n: int) -> np.ndarray:
    """theta as an (n, n+1) array of blocks."""
    values = theta.theta if isinstance(theta, ParamVector) else np.asarray(theta, dtype=float).ravel()
    if values.size != n * (n + 1):
        raise DimensionError(f"theta of length {values.size} does not match n = {n}")
    return values.reshape(n, n + 1)


def component_names(n: int) -> List[str]:
    """Names of theta's entries in vec order: a11, a12, ..., c1, a21, ... (a1_2 style when n >= 10)."""
    sep = "" if n < 10 else "_"
    names = []
    for i in range(1, n + 1):
        names.extend(f"a{i}{sep}{j}" for j in range(1, n + 1))
        names.append(f"c{i}")
    return names


_WEIGHT = re.compile(r"^a(\d+)_(\d+)$")
_SHORT_WEIGHT = re.compile(r"^a(\d)(\d)$")
_THRESHOLD = re.compile(r"^c(\d+)$")


def component_index(name: str, n: int) -> int:
    """Position of a named component (a12, a1_2, c3, ...) inside theta."""
    key = name.strip().lower()
    match = _WEIGHT.match(key) or (_SHORT_WEIGHT.match(key) if n < 10 else None)
    if match:
        i, j = int(match.group(1)), int(match.group(2))
        if 1 <= i <= n and 1 <= j <= n:
            return (i - 1) * (n + 1) + (j - 1)
    match = _THRESHOLD.match(key)
    if match and 1 <= int(match.group(1)) <= n:
        return (int(match.group(1)) - 1) * (n + 1) + n
    raise DimensionError(f"unknown parameter component '{name}' for n = {n}")
