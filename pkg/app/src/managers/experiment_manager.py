import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.errors import BinnetError, DimensionError, TrialError
from ..models.estimation_models import EstimationRun, StepSchedule
from ..models.experiment_models import ExperimentConfig, MseCurve
from ..models.network_models import NetworkParams
from ..services.dynamics.parameters import component_index, component_names, vec_params
from ..services.estimation.sa_estimator import run_estimator
from ..utils.csv_io import write_mse_csv, write_rows, write_run_csv
from ..utils.param_files import load_params

logger = logging.getLogger(__name__)


def _run_trial(job: Tuple[int, NetworkParams, Optional[np.ndarray], ExperimentConfig]) -> EstimationRun:
    trial, params, theta0, config = job
    try:
        return run_estimator(
            params,
            theta0=theta0,
            schedule=StepSchedule(a=config.schedule_a, b=config.schedule_b),
            T=config.T,
            seed=config.trial_seed(trial),
            snapshot_every=config.snapshot_every,
            bound=config.bound,
            use_initial_state=config.use_initial_state,
        )
    except BinnetError as e:
        raise TrialError(trial, e) from e


def mse_curve(runs: Sequence[EstimationRun]) -> MseCurve:
    """MSE_k over trials, accumulated in trial order."""
    if not runs:
        raise ValueError("at least one run is required")
    checkpoints = runs[0].checkpoints
    total = np.zeros(checkpoints.size)
    for run in runs:
        if run.truth is None:
            raise ValueError("runs must carry the true parameters")
        if not np.array_equal(run.checkpoints, checkpoints):
            raise DimensionError("runs have different checkpoints")
        total += np.sum((run.snapshots - run.truth) ** 2, axis=1)
    return MseCurve(checkpoints=checkpoints, mse=total / len(runs), n_trials=len(runs))


def merge_mse_curves(first: MseCurve, second: MseCurve) -> MseCurve:
    """MSE over the union of two disjoint trial sets."""
    if not np.array_equal(first.checkpoints, second.checkpoints):
        raise DimensionError("curves have different checkpoints")
    trials = first.n_trials + second.n_trials
    mse = (first.n_trials * first.mse + second.n_trials * second.mse) / trials
    return MseCurve(checkpoints=first.checkpoints, mse=mse, n_trials=trials)


class ExperimentManager:
    """
    Runs independent estimation trials for one experiment config and writes
    their records.
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.params = load_params(config.params)
        self.truth = vec_params(self.params).theta
        self.theta0 = self._load_theta0()
        self.tracked = [component_index(name, self.params.n) for name in config.track]
        logger.info(
            f"ExperimentManager initialized: n = {self.params.n}, trials = {config.trials}, "
            f"T = {config.T}, workers = {config.workers}"
        )

    def _load_theta0(self) -> Optional[np.ndarray]:
        if self.config.theta0.lower() == "zeros":
            return None
        start = load_params(self.config.theta0)
        if start.n != self.params.n:
            raise DimensionError(f"theta0 has n = {start.n}, generating params have n = {self.params.n}")
        return vec_params(start).theta

    def run_trials(self, workers: Optional[int] = None) -> List[EstimationRun]:
        """
        Run every trial; results come back ordered by trial index whatever
        the completion order.
        """
        workers = workers or self.config.workers
        jobs = [(trial, self.params, self.theta0, self.config) for trial in range(self.config.trials)]
        if workers == 1:
            runs = [_run_trial(job) for job in jobs]
        else:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                runs = list(pool.map(_run_trial, jobs))
        for trial, run in enumerate(runs):
            logger.debug(f"Trial {trial} (seed {run.seed}): final error {run.final_error:.4f}")
        finals = [run.final_error for run in runs]
        firsts = [float(run.err_norms[0]) for run in runs]
        logger.info(
            f"Finished {len(runs)} trials: median first-checkpoint error {np.median(firsts):.4f}, "
            f"median final error {np.median(finals):.4f}"
        )
        return runs

    def write_outputs(self, runs: Sequence[EstimationRun], out_dir: Path) -> MseCurve:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        width = max(3, len(str(len(runs) - 1)))
        for trial, run in enumerate(runs):
            write_run_csv(out_dir / f"run_{trial:0{width}d}.csv", run)

        curve = mse_curve(runs)
        write_mse_csv(out_dir / "mse.csv", curve)
        write_rows(
            out_dir / "summary.csv",
            ("trial", "seed", "final_err", "truncation_count"),
            ((trial, run.seed, run.final_error, run.truncation_count) for trial, run in enumerate(runs)),
        )
        names = component_names(self.params.n)
        write_rows(out_dir / "truth.csv", ("component", "value"), zip(names, self.truth))
        if self.tracked:
            rows = (
                (int(t), trial, names[index], run.snapshots[k, index])
                for trial, run in enumerate(runs)
                for k, t in enumerate(run.checkpoints)
                for index in self.tracked
            )
            write_rows(out_dir / "paths.csv", ("t", "trial", "component", "value"), rows)
        logger.info(f"Wrote {len(runs)} run records and mse.csv to {out_dir}")
        return curve
