"""
theta_{t+1} = Pi_M[theta_t + a_t K(theta_t, S~_{t+1})]

K is the score of sum_i log g_i, a_t = a / (t + b) and Pi_M clamps every
component to [-M, M] when a bound is configured.
"""
import logging
from typing import Callable, Dict, Iterable, Optional, Tuple, Union

import numpy as np

from ...core.config import get_settings
from ...core.errors import DimensionError, NumericalError, StreamUnderflowError
from ...models.estimation_models import EstimationRun, EstimatorState, StepSchedule
from ...models.network_models import ExtState, NetworkParams, ParamVector, StateVec, bits_to_array
from ..dynamics.parameters import vec_params
from ..dynamics.simulator import simulate_trajectory
from ..likelihood.probit_likelihood import score_matrix

logger = logging.getLogger(__name__)

ScoreFn = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]

_UNSET = object()


def project(theta: np.ndarray, bound: Optional[float]) -> Tuple[np.ndarray, bool]:
    """Clamp to [-bound, bound]; report whether any component moved."""
    if bound is None:
        return theta, False
    clamped = np.clip(theta, -bound, bound)
    return clamped, bool(np.any(clamped != theta))


def _check_finite(direction: np.ndarray) -> None:
    if not np.all(np.isfinite(direction)):
        bad = int(np.argmax(~np.all(np.isfinite(direction), axis=1)))
        raise NumericalError("non-finite score", block=bad)


def initial_state(
    n: int,
    schedule: Optional[StepSchedule] = None,
    theta0: Optional[Union[ParamVector, np.ndarray]] = None,
    bound=_UNSET,
) -> EstimatorState:
    """EstimatorState at t = 1; theta0 defaults to zeros, bound to PROJECTION_BOUND."""
    settings = get_settings()
    schedule = schedule or StepSchedule(a=settings.SCHEDULE_A, b=settings.SCHEDULE_B)
    bound = settings.PROJECTION_BOUND if bound is _UNSET else bound
    if theta0 is None:
        theta = np.zeros(n * (n + 1))
    else:
        theta = theta0.theta if isinstance(theta0, ParamVector) else np.asarray(theta0, dtype=float).ravel()
    if theta.size != n * (n + 1):
        raise DimensionError(f"theta0 of length {theta.size} does not match n = {n}")
    return EstimatorState(n=n, theta=theta, t=1, schedule=schedule, bound=bound)


def sa_step(state: EstimatorState, xt: ExtState, score_fn: ScoreFn = score_matrix) -> EstimatorState:
    """One recursion step driven by the extended observation xt."""
    n = state.n
    if xt.n != n:
        raise DimensionError(f"extended state width {xt.n} does not match n = {n}")
    blocks = state.theta.reshape(n, n + 1)
    direction = score_fn(blocks, xt.previous.to_array(), xt.current.to_array())
    _check_finite(direction)
    theta, clipped = project(state.theta + state.schedule.step(state.t) * direction.ravel(), state.bound)
    return EstimatorState(
        n=n,
        theta=theta,
        t=state.t + 1,
        schedule=state.schedule,
        bound=state.bound,
        truncation_count=state.truncation_count + int(clipped),
    )


class RecursiveEstimator:
    """
    Mutable driver of the recursion for long runs; applies the same update
    law as sa_step without re-validating a model per step.
    """

    def __init__(self, state: EstimatorState, score_fn: ScoreFn = score_matrix):
        self.n = state.n
        self.theta = np.array(state.theta, dtype=float)
        self.t = state.t
        self.schedule = state.schedule
        self.bound = state.bound
        self.truncation_count = state.truncation_count
        self.score_fn = score_fn
        self._rows: Dict[int, np.ndarray] = {}

    def _state_row(self, bits: int) -> np.ndarray:
        row = self._rows.get(bits)
        if row is None:
            row = self._rows[bits] = bits_to_array(bits, self.n)
        return row

    def update(self, previous: int, current: int) -> None:
        n = self.n
        direction = self.score_fn(
            self.theta.reshape(n, n + 1), self._state_row(previous), self._state_row(current)
        )
        _check_finite(direction)
        self.theta, clipped = project(self.theta + self.schedule.step(self.t) * direction.ravel(), self.bound)
        if clipped:
            self.truncation_count += 1
            logger.debug(f"Projection active at t = {self.t} (count {self.truncation_count})")
        self.t += 1

    def state(self) -> EstimatorState:
        return EstimatorState(
            n=self.n,
            theta=self.theta,
            t=self.t,
            schedule=self.schedule,
            bound=self.bound,
            truncation_count=self.truncation_count,
        )


def _as_bits(state: Union[StateVec, int], n: int) -> int:
    if isinstance(state, StateVec):
        if state.n != n:
            raise DimensionError(f"observed state width {state.n} does not match n = {n}")
        return state.bits
    bits = int(state)
    if not 0 <= bits < 1 << n:
        raise DimensionError(f"bitmask {bits} does not fit in {n} bits")
    return bits


def run_estimator_on_stream(
    theta0: Optional[Union[ParamVector, np.ndarray]],
    schedule: StepSchedule,
    stream: Iterable[Union[StateVec, int]],
    n: Optional[int] = None,
    bound=_UNSET,
    snapshot_every: Optional[int] = None,
    truth: Optional[np.ndarray] = None,
    seed: Optional[int] = None,
) -> EstimationRun:
    """
    Run the recursion over consecutive pairs of an observation stream.

    Args:
        theta0: Initial estimate (zeros when None)
        schedule: Step sizes
        stream: S_0, S_1, ... as StateVec or bitmasks
        n: Agent count (taken from theta0 when it is a ParamVector)
        bound: Projection radius, None disables projection
        snapshot_every: Snapshot cadence in updates
        truth: theta* for error norms in the run record
        seed: Recorded in the run record

    Returns:
        EstimationRun
    """
    if n is None:
        if not isinstance(theta0, ParamVector):
            raise DimensionError("n is required unless theta0 is a ParamVector")
        n = theta0.n
    snapshot_every = snapshot_every or get_settings().SNAPSHOT_EVERY
    if snapshot_every < 1:
        raise ValueError("snapshot_every must be >= 1")

    estimator = RecursiveEstimator(initial_state(n, schedule, theta0, bound))
    checkpoints, snapshots = [], []
    previous = None
    updates = 0
    for observed in stream:
        current = _as_bits(observed, n)
        if previous is not None:
            estimator.update(previous, current)
            updates += 1
            if updates % snapshot_every == 0:
                checkpoints.append(updates)
                snapshots.append(estimator.theta.copy())
        previous = current

    if updates == 0:
        raise StreamUnderflowError("the observation stream must yield at least two states")
    if not checkpoints or checkpoints[-1] != updates:
        checkpoints.append(updates)
        snapshots.append(estimator.theta.copy())

    if estimator.truncation_count:
        logger.warning(f"Projection clamped the estimate {estimator.truncation_count} times")
    return EstimationRun(
        n=n,
        checkpoints=checkpoints,
        snapshots=np.vstack(snapshots),
        final_theta=estimator.theta,
        updates=updates,
        truncation_count=estimator.truncation_count,
        seed=seed,
        truth=truth,
    )


def run_estimator(
    params: NetworkParams,
    theta0: Optional[Union[ParamVector, np.ndarray]] = None,
    schedule: Optional[StepSchedule] = None,
    T: int = 1,
    seed: int = 0,
    snapshot_every: Optional[int] = None,
    bound=_UNSET,
    s0: Optional[StateVec] = None,
    use_initial_state: bool = True,
) -> EstimationRun:
    """
    Simulate T steps from the generating parameters and estimate online.

    With use_initial_state the first update uses (S_1, S_0); otherwise S_0 is
    treated as unobserved and the first update uses (S_2, S_1).
    """
    settings = get_settings()
    schedule = schedule or StepSchedule(a=settings.SCHEDULE_A, b=settings.SCHEDULE_B)
    trajectory = simulate_trajectory(params, s0=s0, T=T, seed=seed)
    chain = trajectory.chain()
    if not use_initial_state:
        chain = chain[1:]
    return run_estimator_on_stream(
        theta0,
        schedule,
        chain,
        n=params.n,
        bound=bound,
        snapshot_every=snapshot_every,
        truth=vec_params(params).theta,
        seed=seed,
    )
