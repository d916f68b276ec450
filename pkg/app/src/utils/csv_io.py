"""
CSV writers and readers. Floats are written with repr, the shortest
decimal that round-trips to the same double.
"""
import csv
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np

from ..core.errors import ConfigError
from ..models.estimation_models import EstimationRun
from ..models.experiment_models import MseCurve
from ..models.network_models import Trajectory

PathLike = Union[str, Path]


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def write_rows(path: PathLike, header: Optional[Sequence[str]], rows: Iterable[Sequence]) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        if header:
            writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(value) for value in row])
    return path


def write_trajectory_csv(path: PathLike, trajectory: Trajectory) -> Path:
    """Header t,s_bits; row t holds S_t for t = 1..T."""
    return write_rows(
        path,
        ("t", "s_bits"),
        ((t, int(bits)) for t, bits in enumerate(trajectory.observations, start=1)),
    )


def write_matrix_csv(path: PathLike, matrix: np.ndarray) -> Path:
    """Row-major dense matrix, no header."""
    return write_rows(path, None, (list(row) for row in np.atleast_2d(matrix)))


def read_matrix_csv(path: PathLike) -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise ConfigError("file not found", path=str(path))
    rows: List[List[float]] = []
    with open(path, newline="", encoding="utf-8") as handle:
        for number, row in enumerate(csv.reader(handle), start=1):
            if not row:
                continue
            try:
                values = [float(cell) for cell in row]
            except ValueError as e:
                raise ConfigError("non-numeric entry", path=str(path), line=number) from e
            if rows and len(values) != len(rows[0]):
                raise ConfigError(
                    f"row has {len(values)} entries, expected {len(rows[0])}", path=str(path), line=number
                )
            rows.append(values)
    if not rows:
        raise ConfigError("empty matrix file", path=str(path))
    return np.array(rows)


def write_distribution_csv(path: PathLike, pi: np.ndarray) -> Path:
    return write_rows(path, ("state", "probability"), enumerate(pi))


def write_run_csv(path: PathLike, run: EstimationRun) -> Path:
    """Header t,theta_1..theta_d[,err_norm]."""
    dim = run.snapshots.shape[1]
    header = ["t"] + [f"theta_{k}" for k in range(1, dim + 1)]
    errors = run.err_norms
    if errors is not None:
        header.append("err_norm")
    rows = []
    for k, t in enumerate(run.checkpoints):
        row = [int(t)] + list(run.snapshots[k])
        if errors is not None:
            row.append(errors[k])
        rows.append(row)
    return write_rows(path, header, rows)


def write_mse_csv(path: PathLike, curve: MseCurve) -> Path:
    return write_rows(
        path,
        ("t", "mse", "n_trials"),
        ((int(t), m, curve.n_trials) for t, m in zip(curve.checkpoints, curve.mse)),
    )


def write_sweep_csv(path: PathLike, rows: Iterable[Sequence]) -> Path:
    return write_rows(path, ("theta_component", "offset", "value", "grad_norm"), rows)
