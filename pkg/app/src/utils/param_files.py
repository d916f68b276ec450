"""
Flat key=value files for network parameters and experiment settings.

Lines are tokenised with python-dotenv's stream parser, which keeps the line
number of every binding, and then validated with pydantic. `#` starts a
comment. Unknown keys are errors.

Params file:
    n=2
    A=0.8,-0.3,0.4,0.5      # row-major
    c=0.1,-0.2
    sigma=1,1               # optional
"""
import logging
from pathlib import Path
from typing import Dict, Tuple, Union

import numpy as np
from dotenv.parser import parse_stream
from pydantic import ValidationError

from ..core.errors import ConfigError
from ..models.experiment_models import ExperimentConfig
from ..models.network_models import NetworkParams

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

PARAM_KEYS = ("n", "A", "c", "sigma")


def _first_line(binding) -> int:
    # a binding's original text starts with any blank lines before it
    text = binding.original.string
    return binding.original.line + text[:len(text) - len(text.lstrip())].count("\n")


def read_bindings(path: PathLike) -> Dict[str, Tuple[str, int]]:
    """
    Read key=value bindings.

    Returns:
        Mapping key -> (raw value, line number)
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError("file not found", path=str(path))
    bindings: Dict[str, Tuple[str, int]] = {}
    with open(path, encoding="utf-8") as stream:
        for binding in parse_stream(stream):
            line = _first_line(binding)
            if binding.error:
                raise ConfigError(f"cannot parse '{binding.original.string.strip()}'", path=str(path), line=line)
            if binding.key is None:
                continue
            if binding.value is None:
                raise ConfigError(f"key '{binding.key}' has no value", path=str(path), line=line)
            if binding.key in bindings:
                raise ConfigError(f"duplicate key '{binding.key}'", path=str(path), line=line)
            bindings[binding.key] = (binding.value.strip(), line)
    return bindings


def _line_of(error: dict, bindings: Dict[str, Tuple[str, int]]):
    loc = error.get("loc") or ()
    if loc and loc[0] in bindings:
        return bindings[loc[0]][1]
    return None


def _raise_validation(e: ValidationError, bindings, path: Path):
    first = e.errors()[0]
    field = ".".join(str(part) for part in first.get("loc", ())) or "file"
    raise ConfigError(f"{field}: {first['msg']}", path=str(path), line=_line_of(first, bindings)) from e


def _floats(raw: str, key: str, line: int, path: Path) -> Tuple[float, ...]:
    try:
        return tuple(float(item) for item in raw.split(",") if item.strip())
    except ValueError as e:
        raise ConfigError(f"{key} must be a comma-separated list of numbers", path=str(path), line=line) from e


def load_params(path: PathLike) -> NetworkParams:
    path = Path(path)
    bindings = read_bindings(path)
    for key, (_, line) in bindings.items():
        if key not in PARAM_KEYS:
            raise ConfigError(f"unknown key '{key}'", path=str(path), line=line)
    for key in ("n", "A", "c"):
        if key not in bindings:
            raise ConfigError(f"missing key '{key}'", path=str(path))

    raw_n, n_line = bindings["n"]
    try:
        n = int(raw_n)
    except ValueError as e:
        raise ConfigError("n must be an integer", path=str(path), line=n_line) from e
    weights = _floats(bindings["A"][0], "A", bindings["A"][1], path)
    if len(weights) != n * n:
        raise ConfigError(f"A must hold n*n = {n * n} values, got {len(weights)}", path=str(path), line=bindings["A"][1])
    values = {
        "n": n,
        "A": np.reshape(weights, (n, n)).tolist(),
        "c": _floats(bindings["c"][0], "c", bindings["c"][1], path),
    }
    if "sigma" in bindings:
        values["sigma"] = _floats(bindings["sigma"][0], "sigma", bindings["sigma"][1], path)
    try:
        params = NetworkParams(**values)
    except ValidationError as e:
        _raise_validation(e, bindings, path)
    logger.info(f"Loaded params for n = {params.n} from {path}")
    return params


def format_params(params: NetworkParams) -> str:
    lines = [
        f"n={params.n}",
        "A=" + ",".join(repr(float(v)) for v in params.weights.ravel()),
        "c=" + ",".join(repr(float(v)) for v in params.thresholds),
        "sigma=" + ",".join(repr(float(v)) for v in params.noise_std),
    ]
    return "\n".join(lines) + "\n"


def write_params(path: PathLike, params: NetworkParams) -> Path:
    path = Path(path)
    path.write_text(format_params(params), encoding="utf-8")
    return path


def load_experiment_config(path: PathLike) -> ExperimentConfig:
    """Parse an experiment file; relative paths resolve against its directory."""
    path = Path(path)
    bindings = read_bindings(path)
    values = {key: raw for key, (raw, _) in bindings.items()}
    for key in ("params", "theta0"):
        if key in values and not (key == "theta0" and values[key].lower() == "zeros"):
            candidate = Path(values[key])
            if not candidate.is_absolute():
                values[key] = str(path.parent / candidate)
    try:
        config = ExperimentConfig(**values)
    except ValidationError as e:
        _raise_validation(e, bindings, path)
    logger.info(f"Loaded experiment config from {path}")
    return config
