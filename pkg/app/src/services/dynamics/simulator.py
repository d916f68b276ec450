"""
Seeded simulation of the quantized network dynamics.

Every trajectory owns one numpy Generator over the counter-based Philox bit
generator, keyed by SeedSequence(seed). Normal draws are consumed in
(step, agent) row-major order, so chunked and step-by-step simulation give
bit-identical chains.
"""
import logging
from typing import Dict, Optional, Sequence

import numpy as np

from ...core.config import get_settings
from ...core.errors import CapacityError, DimensionError, EmptyTrajectoryError
from ...models.network_models import NetworkParams, StateVec, Trajectory, bits_to_array

logger = logging.getLogger(__name__)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def quantize(y: Sequence[float], c: Sequence[float]) -> StateVec:
    """Bit i is 1 iff y_i > c_i; ties map to 0."""
    y = np.asarray(y, dtype=float).ravel()
    c = np.asarray(c, dtype=float).ravel()
    if y.size != c.size:
        raise DimensionError(f"y has length {y.size} but c has length {c.size}")
    if y.size < 2:
        raise DimensionError(f"quantizer needs at least 2 agents, got {y.size}")
    fired = y > c
    return StateVec(bits=int(np.dot(fired, 1 << np.arange(y.size, dtype=np.int64))), n=y.size)


def step_dynamics(params: NetworkParams, s_prev: StateVec, rng: np.random.Generator) -> StateVec:
    """One draw of S_t given S_{t-1}."""
    if s_prev.n != params.n:
        raise DimensionError(f"state width {s_prev.n} does not match n = {params.n}")
    noise = params.noise_std * rng.standard_normal(params.n)
    y = params.weights @ s_prev.to_array() + noise
    return quantize(y, params.thresholds)


def simulate_trajectory(
    params: NetworkParams,
    s0: Optional[StateVec] = None,
    T: int = 1,
    seed: int = 0,
) -> Trajectory:
    """
    Iterate the dynamics T times from s0 (all zeros by default).

    Args:
        params: Generating network
        s0: Initial state S_0
        T: Number of steps
        seed: Seed of the trajectory's Philox stream

    Returns:
        Trajectory holding S_1..S_T as bitmasks
    """
    settings = get_settings()
    n = params.n
    if T < 1:
        raise EmptyTrajectoryError("a trajectory needs T >= 1 steps")
    if n > settings.MAX_SIMULATION_AGENTS:
        raise CapacityError("simulation", n, settings.MAX_SIMULATION_AGENTS)
    s0 = s0 if s0 is not None else StateVec.zeros(n)
    if s0.n != n:
        raise DimensionError(f"initial state width {s0.n} does not match n = {n}")

    rng = make_rng(seed)
    weights = params.weights
    thresholds = params.thresholds
    sigma = params.noise_std
    powers = 1 << np.arange(n, dtype=np.int64)

    # A x(u) per visited state u
    means: Dict[int, np.ndarray] = {}
    observations = np.empty(T, dtype=np.int64)
    state = s0.bits
    done = 0
    while done < T:
        rows = min(settings.SIMULATION_CHUNK, T - done)
        noise = sigma * rng.standard_normal((rows, n))
        for k in range(rows):
            mean = means.get(state)
            if mean is None:
                mean = means[state] = weights @ bits_to_array(state, n)
            state = int(powers[mean + noise[k] > thresholds].sum())
            observations[done + k] = state
        done += rows

    logger.debug(f"Simulated {T} steps for n = {n} with seed {seed}")
    return Trajectory(n=n, initial=s0, observations=observations, seed=seed)


def visit_counts(trajectory: Trajectory) -> np.ndarray:
    """Occupation counts of S_1..S_T per bitmask."""
    return np.bincount(trajectory.observations, minlength=1 << trajectory.n)
