"""
Flat `key = value` experiment files.

Lists are comma separated; intervals are written `lo:hi`. Blank values fall
back to the defaults of ExperimentConfig. Example:

    positions = 0, 1, 2, 3, 10, 17
    doa_intervals_deg = -20:-10, 20:30
    snr_grid_db = -10, -5, 0, 5, 10
    trials = 200
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple
import logging

from dotenv import dotenv_values
from pydantic import ValidationError

from app.core.exceptions import ConfigError
from app.models.experiment import ExperimentConfig

logger = logging.getLogger(__name__)

LIST_KEYS = {"positions", "snr_grid_db", "models", "phases_rad", "lemma_precedence"}
INTERVAL_KEYS = {"doa_intervals_deg"}
RANGE_KEYS = {"grid_range_deg"}


def _split(value: str) -> List[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def _interval(text: str) -> Tuple[str, str]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise ConfigError(f"expected an interval written lo:hi, got '{text}'")
    return lo.strip(), hi.strip()


def parse_values(raw: Dict[str, Optional[str]]) -> Dict[str, Any]:
    known = set(ExperimentConfig.__fields__)
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ConfigError(f"unknown experiment keys: {', '.join(unknown)}")

    parsed: Dict[str, Any] = {}
    for key, value in raw.items():
        if value is None or value.strip() == "":
            continue
        if key in LIST_KEYS:
            parsed[key] = _split(value)
        elif key in INTERVAL_KEYS:
            parsed[key] = [_interval(item) for item in _split(value)]
        elif key in RANGE_KEYS:
            parsed[key] = _interval(value)
        else:
            parsed[key] = value.strip()
    return parsed


def load_experiment_config(path: str, **overrides: Any) -> ExperimentConfig:
    """Read and validate an experiment file; keyword overrides win over file values."""
    file_path = Path(path)
    if not file_path.is_file():
        raise ConfigError(f"experiment file not found: {path}")
    try:
        raw = dotenv_values(file_path)
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigError(f"cannot read experiment file {path}: {e}") from e

    values = parse_values(raw)
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        cfg = ExperimentConfig(**values)
    except ValidationError as e:
        messages = "; ".join(f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors())
        raise ConfigError(f"invalid experiment file {path}: {messages}") from e

    logger.info(f"✅ Experiment loaded from {path} - positions {cfg.positions}, {cfg.num_sources} sources")
    return cfg
