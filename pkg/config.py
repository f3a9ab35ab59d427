#!/usr/bin/env python3
"""
Configuration Module for icckit

Collects every tolerance, grid default and simulator constant in one place.
Values come from DEFAULT_CONFIG, an optional YAML file, a .env file and
ICCKIT_* environment variables, in increasing order of priority.
"""

import os
import logging
from dataclasses import dataclass, asdict, fields
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

# Try to import optional dependencies
try:
    from dotenv import load_dotenv
    DOTENV_AVAILABLE = True
except ImportError:
    DOTENV_AVAILABLE = False

try:
    import yaml
    YAML_AVAILABLE = True
except ImportError:
    YAML_AVAILABLE = False

from errors import ConfigError


# Default configuration values
DEFAULT_CONFIG = {
    'member_tol': 1e-9,
    'pmf_tol': 1e-12,
    'independence_tol': 1e-9,
    'dedup_tol': 1e-12,
    'grid_step': 0.05,
    'bbox': (0.0, 2.0),
    'sweep_grid_step': 0.25,
    'sweep_grid_limit': 20000,
    'sweep_samples': 200,
    'union_samples': 200,
    'aux_card': 2,
    'epsilon': 0.1,
    'typicality': 'weak',
    'codebook_cap': 2 ** 20,
    'decoder_chunk': 2 ** 22,
    'threads': 0,  # 0 means "pick from cpu count"
    'seed': 0,
    'halving_factor': 2.0,
    'exterior_floor': 0.3,
    'log_level': 'INFO',
    'log_format': '%(asctime)s - %(levelname)s - %(message)s',
}

ENV_VARS = {
    'threads': 'ICCKIT_THREADS',
    'seed': 'ICCKIT_SEED',
    'log_level': 'ICCKIT_LOG_LEVEL',
    'member_tol': 'ICCKIT_TOL',
    'epsilon': 'ICCKIT_EPSILON',
    'codebook_cap': 'ICCKIT_CODEBOOK_CAP',
    'typicality': 'ICCKIT_TYPICALITY',
}

TYPICALITY_FLAVORS = ('weak', 'strong')

TOOL_VERSION = '0.1.0'


@dataclass(frozen=True)
class IcckitConfig:
    """Configuration data class for type safety and validation."""
    member_tol: float = DEFAULT_CONFIG['member_tol']
    pmf_tol: float = DEFAULT_CONFIG['pmf_tol']
    independence_tol: float = DEFAULT_CONFIG['independence_tol']
    dedup_tol: float = DEFAULT_CONFIG['dedup_tol']
    grid_step: float = DEFAULT_CONFIG['grid_step']
    bbox: Tuple[float, float] = DEFAULT_CONFIG['bbox']
    sweep_grid_step: float = DEFAULT_CONFIG['sweep_grid_step']
    sweep_grid_limit: int = DEFAULT_CONFIG['sweep_grid_limit']
    sweep_samples: int = DEFAULT_CONFIG['sweep_samples']
    union_samples: int = DEFAULT_CONFIG['union_samples']
    aux_card: int = DEFAULT_CONFIG['aux_card']
    epsilon: float = DEFAULT_CONFIG['epsilon']
    typicality: str = DEFAULT_CONFIG['typicality']
    codebook_cap: int = DEFAULT_CONFIG['codebook_cap']
    decoder_chunk: int = DEFAULT_CONFIG['decoder_chunk']
    threads: int = DEFAULT_CONFIG['threads']
    seed: int = DEFAULT_CONFIG['seed']
    halving_factor: float = DEFAULT_CONFIG['halving_factor']
    exterior_floor: float = DEFAULT_CONFIG['exterior_floor']
    log_level: str = DEFAULT_CONFIG['log_level']
    log_format: str = DEFAULT_CONFIG['log_format']

    def worker_count(self) -> int:
        """Number of worker threads for sweeps, unions and simulations."""
        if self.threads and self.threads > 0:
            return self.threads
        return max(1, min(8, os.cpu_count() or 1))

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['bbox'] = list(self.bbox)
        return data


def _coerce(name: str, raw: Any) -> Any:
    """Convert a raw YAML/env value to the type of the matching default."""
    default = DEFAULT_CONFIG[name]
    try:
        if name == 'bbox':
            if isinstance(raw, str):
                lo, hi = raw.split(':')
                return (float(lo), float(hi))
            lo, hi = raw
            return (float(lo), float(hi))
        if isinstance(default, bool):
            return str(raw).lower() in ('1', 'true', 'yes')
        if isinstance(default, int):
            return int(raw)
        if isinstance(default, float):
            return float(raw)
        return str(raw)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid value for {name}: {raw!r} ({e})")


def validate_config(config: IcckitConfig) -> IcckitConfig:
    """Validate configuration values, raising ConfigError listing every problem."""
    problems = []

    for name in ('member_tol', 'pmf_tol', 'independence_tol', 'dedup_tol'):
        if getattr(config, name) < 0:
            problems.append(f"{name} cannot be negative")

    for name in ('grid_step', 'sweep_grid_step', 'epsilon'):
        if getattr(config, name) <= 0:
            problems.append(f"{name} must be positive")

    for name in ('sweep_samples', 'union_samples', 'aux_card', 'codebook_cap',
                 'decoder_chunk', 'sweep_grid_limit'):
        if getattr(config, name) < 1:
            problems.append(f"{name} must be at least 1")

    if config.threads < 0:
        problems.append("threads cannot be negative")

    lo, hi = config.bbox
    if hi < lo:
        problems.append(f"bbox upper bound {hi} is below lower bound {lo}")

    if config.typicality not in TYPICALITY_FLAVORS:
        problems.append(f"typicality must be one of {', '.join(TYPICALITY_FLAVORS)}")

    if config.halving_factor < 1:
        problems.append("halving_factor must be at least 1")

    if not 0 <= config.exterior_floor <= 1:
        problems.append("exterior_floor must lie in [0, 1]")

    if logging.getLevelName(config.log_level.upper()) == f"Level {config.log_level.upper()}":
        problems.append(f"Unknown log level: {config.log_level}")

    if problems:
        for problem in problems:
            logging.error(f"Configuration error: {problem}")
        raise ConfigError("; ".join(problems))

    logging.debug("Configuration validation passed")
    return config


class ConfigManager:
    """Configuration manager merging defaults, YAML, .env and environment."""

    def __init__(self, config_path: Optional[str] = None):
        self.config_path = config_path
        self.load_environment()

    def load_environment(self):
        """Load environment variables from .env file if available."""
        if DOTENV_AVAILABLE:
            env_file = Path('.env')
            if env_file.exists():
                load_dotenv(env_file)
                logging.debug("Loaded configuration from .env file")
        else:
            logging.debug("python-dotenv not available, using system environment variables only")

    def load_yaml(self) -> Dict[str, Any]:
        """Load the YAML config file named explicitly, by ICCKIT_CONFIG, or ./icckit.yaml."""
        path = self.config_path or os.getenv('ICCKIT_CONFIG') or './icckit.yaml'
        config_file = Path(path)
        if not config_file.exists():
            if self.config_path or os.getenv('ICCKIT_CONFIG'):
                raise ConfigError(f"Config file not found: {path}")
            return {}

        if not YAML_AVAILABLE:
            logging.warning(f"PyYAML not available - ignoring {path}")
            return {}

        try:
            with open(config_file, 'r', encoding='utf-8') as f:
                data = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            raise ConfigError(f"Failed to parse {path}: {e}")

        if not isinstance(data, dict):
            raise ConfigError(f"{path}: expected a mapping at top level")

        unknown = sorted(set(data) - set(DEFAULT_CONFIG))
        if unknown:
            raise ConfigError(f"{path}: unknown keys {', '.join(unknown)}")

        logging.info(f"Loaded configuration from {path}")
        return {name: _coerce(name, value) for name, value in data.items()}

    def get_config_from_env(self) -> Dict[str, Any]:
        """Collect ICCKIT_* overrides from the environment."""
        overrides = {}
        for name, env_name in ENV_VARS.items():
            raw = os.getenv(env_name)
            if raw is not None and raw.strip() != '':
                overrides[name] = _coerce(name, raw.strip())
        return overrides

    def get_config(self, **overrides) -> IcckitConfig:
        """Build a validated config; keyword overrides win over every other source."""
        values = dict(DEFAULT_CONFIG)
        values.update(self.load_yaml())
        values.update(self.get_config_from_env())
        values.update({k: v for k, v in overrides.items() if v is not None})

        known = {f.name for f in fields(IcckitConfig)}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ConfigError(f"Unknown configuration keys: {', '.join(unknown)}")

        values['bbox'] = _coerce('bbox', values['bbox'])
        return validate_config(IcckitConfig(**values))


_active_config: Optional[IcckitConfig] = None


def get_config() -> IcckitConfig:
    """Process-wide configuration, built on first use."""
    global _active_config
    if _active_config is None:
        _active_config = ConfigManager().get_config()
    return _active_config


def set_config(config: Optional[IcckitConfig]):
    """Install (or with None, reset) the process-wide configuration."""
    global _active_config
    _active_config = validate_config(config) if config is not None else None
