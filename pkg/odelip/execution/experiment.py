"""Experiment configuration: per-system defaults, key-value files and echo"""

import logging
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from dotenv import dotenv_values

from odelip.config import Config
from odelip.core.dataset import NoiseSpec
from odelip.core.errors import ConfigError, OdelipError
from odelip.core.training import TrainConfig
from odelip.data.pipeline import SMOOTHING_ORDERS
from odelip.evaluation.metrics import GridSpec
from odelip.systems.catalog import get_system

logger = logging.getLogger(__name__)

# Architecture and schedule reported for each experiment
SYSTEM_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "xcosx": {"n_layers": 8, "width": 30, "batch_size": 50, "decay_period": 7},
    "explog": {"n_layers": 8, "width": 30, "batch_size": 100, "decay_period": 5},
    "lotka_volterra": {"n_layers": 10, "width": 50, "batch_size": 200, "decay_period": 3},
    "pendulum": {"n_layers": 10, "width": 60, "batch_size": 100, "decay_period": 3},
}

SEED_OFFSETS = {
    "ic_seed": 0,
    "noise_seed": 1,
    "split_seed": 2,
    "init_seed": 3,
    "shuffle_seed": 4,
    "probe_seed": 5,
}

TRUE_WORDS = {"1", "true", "yes", "on"}
FALSE_WORDS = {"0", "false", "no", "off"}


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything one experiment needs, with the xcosx settings as defaults"""
    system: str = "xcosx"
    noise: float = 0.0
    noise_param_is_variance: bool = False
    smoothing_order: str = "smooth_then_extend"
    ic_seed: int = 0
    noise_seed: int = 1
    split_seed: int = 2
    init_seed: int = 3
    shuffle_seed: int = 4
    probe_seed: int = 5
    alphas: Tuple[float, ...] = tuple(Config.DEFAULT_ALPHAS)
    n_layers: int = 8
    width: int = 30
    batch_size: int = 50
    lr0: float = 1e-2
    decay_factor: float = 0.1
    decay_period: int = 7
    max_epochs: int = 60
    baseline_epochs: int = 10
    probe_n: int = Config.REPORT_PROBE_N
    step_probe_n: int = Config.STEP_PROBE_N
    optimizer: str = "adam"
    momentum: float = 0.0
    substeps: int = Config.RK4_SUBSTEPS
    recovery: bool = False
    grid_nt: int = Config.GRID_NT
    grid_nx: int = Config.GRID_NX
    pointwise_relative: bool = False
    workers: int = Config.MAX_WORKERS
    out: str = Config.OUTPUT_DIR
    
    def __post_init__(self):
        try:
            get_system(self.system)
            self.train_config()
            self.noise_spec()
        except OdelipError as e:
            raise ConfigError(f"Invalid configuration: {e}") from e
        if self.smoothing_order not in SMOOTHING_ORDERS:
            raise ConfigError(f"smoothing_order must be one of {SMOOTHING_ORDERS}, got '{self.smoothing_order}'")
        if not self.alphas:
            raise ConfigError("alphas must not be empty")
        if self.grid_nt < 2 or self.grid_nx < 2:
            raise ConfigError("Recovery grid needs at least 2 points per axis")
    
    def train_config(self, alpha: float = 0.0) -> TrainConfig:
        return TrainConfig(
            alpha=alpha,
            batch_size=self.batch_size,
            lr0=self.lr0,
            decay_factor=self.decay_factor,
            decay_period=self.decay_period,
            max_epochs=self.max_epochs,
            baseline_epochs=self.baseline_epochs,
            n_layers=self.n_layers,
            width=self.width,
            probe_n=self.probe_n,
            step_probe_n=self.step_probe_n,
            optimizer=self.optimizer,
            momentum=self.momentum,
            init_seed=self.init_seed,
            shuffle_seed=self.shuffle_seed,
            probe_seed=self.probe_seed,
        )
    
    def noise_spec(self) -> NoiseSpec:
        return NoiseSpec(level=self.noise, seed=self.noise_seed, param_is_variance=self.noise_param_is_variance)
    
    def grid_spec(self) -> GridSpec:
        return GridSpec(nt=self.grid_nt, nx=self.grid_nx)


FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def normalize_key(key: str) -> str:
    return key.strip().lower().replace("-", "_")


def _parse_bool(name: str, raw: str) -> bool:
    word = raw.strip().lower()
    if word in TRUE_WORDS:
        return True
    if word in FALSE_WORDS:
        return False
    raise ConfigError(f"{name}: expected a boolean, got '{raw}'")


def coerce(name: str, raw: Any) -> Any:
    """Convert a raw (usually string) value to the field's type"""
    if name == "seed":
        kind = int
    elif name not in FIELD_TYPES:
        raise ConfigError(f"Unknown configuration key '{name}'")
    else:
        kind = FIELD_TYPES[name]
    if not isinstance(raw, str):
        return tuple(float(a) for a in raw) if name == "alphas" else raw
    try:
        if name == "alphas":
            return tuple(float(a) for a in raw.split(",") if a.strip())
        if kind is bool:
            return _parse_bool(name, raw)
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        return raw.strip()
    except ValueError as e:
        raise ConfigError(f"{name}: cannot parse '{raw}': {e}") from e


def parse_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a key=value file; unknown keys are rejected"""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Config file not found: {path}")
    values = {}
    for key, raw in dotenv_values(path).items():
        name = normalize_key(key)
        if raw is None:
            raise ConfigError(f"{path}: key '{key}' has no value")
        values[name] = coerce(name, raw)
    return values


def _expand_seed(values: Dict[str, Any]) -> Dict[str, Any]:
    """A single `seed` fans out to every seed field with fixed offsets"""
    if "seed" not in values:
        return values
    base = int(values.pop("seed"))
    for name, offset in SEED_OFFSETS.items():
        values.setdefault(name, base + offset)
    return values


def load_experiment_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> ExperimentConfig:
    """
    Merge per-system defaults, then the config file, then overrides
    
    Args:
        path: Optional key=value config file
        overrides: Values from the command line; None entries are ignored
    """
    file_values = _expand_seed(parse_config_file(path)) if path else {}
    cli_values = {}
    for key, value in (overrides or {}).items():
        if value is not None:
            name = normalize_key(key)
            cli_values[name] = coerce(name, value)
    cli_values = _expand_seed(cli_values)
    
    system = cli_values.get("system") or file_values.get("system") or ExperimentConfig.system
    merged = {**SYSTEM_DEFAULTS.get(system, {}), **file_values, **cli_values, "system": system}
    try:
        return ExperimentConfig(**merged)
    except TypeError as e:
        raise ConfigError(f"Invalid configuration: {e}") from e


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ",".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dump_config(config: ExperimentConfig, path: Union[str, Path]) -> Path:
    """Echo the effective configuration as a key=value file that re-parses to itself"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{key}={format_value(value)}" for key, value in asdict(config).items()]
    path.write_text("\n".join(lines) + "\n")
    logger.debug(f"Effective configuration written to {path}")
    return path
