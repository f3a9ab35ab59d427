#!/usr/bin/env python3
"""
File Formats Module for icckit

Reads and writes channel, factorization, region and simulation-config
files, and the run manifests written next to every command output.
Numbers are written with 12 significant digits so re-emitting a file
that was read back reproduces it byte for byte.
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from channel import (ChannelSpec, DeterministicSpec, Family, InputFactorization, bsc_pair, identity_channel,
                     lift_deterministic, pairing_deterministic, swap_channel, xor_deterministic,
                     zero_capacity_channel)
from coding_sim import RATE_NAMES, SimConfig
from config import TOOL_VERSION
from errors import IcckitError, UsageError, ValidationError
from polytope import IneqSystem

PathLike = Union[str, Path]

STANDARD_CHANNELS = {
    'identity': identity_channel,
    'bsc_pair': bsc_pair,
    'swap': swap_channel,
    'zero_capacity': zero_capacity_channel,
    'xor': xor_deterministic,
    'pairing': pairing_deterministic,
}


def fmt(value: float) -> str:
    return f"{float(value):.12g}"


def _round(value: float) -> float:
    return float(fmt(value))


def read_json(path: PathLike) -> Any:
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except FileNotFoundError:
        raise UsageError(f"{path}: file not found")
    except json.JSONDecodeError as e:
        raise ValidationError(f"{path}: invalid JSON at line {e.lineno} column {e.colno}: {e.msg}")


def write_json(path: PathLike, data: Any):
    with open(path, 'w', encoding='utf-8') as f:
        f.write(json.dumps(data, indent=2, sort_keys=True))
        f.write('\n')


def _with_source(source: str, func, *args):
    try:
        return func(*args)
    except ValidationError as e:
        raise ValidationError(f"{source}: {e}") from e
    except (KeyError, TypeError) as e:
        raise ValidationError(f"{source}: malformed entry ({e})") from e


# Channels

def channel_from_dict(data: Dict[str, Any], source: str = '<channel>') -> Tuple[ChannelSpec, Optional[DeterministicSpec]]:
    """
    Parse one of three channel layouts:

        {"alphabets": {"X1": 2, "X2": 2, "Y1": 2, "Y2": 2}, "kernel": [... row-major ...]}
        {"deterministic": {"k1": [...], "k2": [...], "o1": [[...]], "o2": [[...]]}}
        {"standard": "xor", "bits": 1}

    Returns:
        tuple: (kernel, deterministic description or None)
    """
    if not isinstance(data, dict):
        raise ValidationError(f"{source}: expected a JSON object")

    if 'standard' in data:
        name = data['standard']
        if name not in STANDARD_CHANNELS:
            raise ValidationError(f"{source}: unknown standard channel {name!r}; "
                                  f"choose from {', '.join(sorted(STANDARD_CHANNELS))}")
        params = {k: v for k, v in data.items() if k != 'standard'}
        built = _with_source(source, lambda: STANDARD_CHANNELS[name](**params))
        if isinstance(built, DeterministicSpec):
            return _with_source(source, lift_deterministic, built), built
        return built, None

    if 'deterministic' in data:
        spec = data['deterministic']
        d = _with_source(source, lambda: DeterministicSpec(
            k1=spec['k1'], k2=spec['k2'], o1=spec['o1'], o2=spec['o2'],
            v1_card=spec.get('v1_card', 0), v2_card=spec.get('v2_card', 0)))
        return _with_source(source, lift_deterministic, d), d

    if 'kernel' not in data or 'alphabets' not in data:
        raise ValidationError(f"{source}: channel needs 'alphabets' and 'kernel', 'deterministic' or 'standard'")
    return _with_source(source, ChannelSpec.from_flat, data['alphabets'], data['kernel']), None


def channel_to_dict(ch: ChannelSpec, d: Optional[DeterministicSpec] = None) -> Dict[str, Any]:
    if d is not None:
        return {'deterministic': {'k1': d.k1.tolist(), 'k2': d.k2.tolist(),
                                  'o1': d.o1.tolist(), 'o2': d.o2.tolist()}}
    return {'alphabets': ch.alphabets, 'kernel': [_round(v) for v in ch.kernel.ravel()]}


def load_channel(path: PathLike) -> Tuple[ChannelSpec, Optional[DeterministicSpec]]:
    return channel_from_dict(read_json(path), str(path))


# Factorizations

def factorization_from_dict(data: Dict[str, Any], source: str = '<factorization>') -> InputFactorization:
    """Parse {"family": "GENERAL_EQ1", "factors": {"U0": [...], "U1": [[...]], ...}}."""
    if not isinstance(data, dict) or 'family' not in data or 'factors' not in data:
        raise ValidationError(f"{source}: factorization needs 'family' and 'factors'")
    try:
        family = Family(data['family'])
    except ValueError:
        raise ValidationError(f"{source}: unknown family {data['family']!r}")
    factors = data['factors']
    if not isinstance(factors, dict):
        raise ValidationError(f"{source}: 'factors' must map variable names to nested lists")
    return _with_source(source, InputFactorization, family,
                        {name: np.asarray(table, dtype=float) for name, table in factors.items()})


def factorization_to_dict(f: InputFactorization) -> Dict[str, Any]:
    data = f.to_dict()
    data['factors'] = {name: np.vectorize(_round)(np.asarray(table)).tolist()
                       for name, table in data['factors'].items()}
    return data


def load_factorization(path: PathLike) -> InputFactorization:
    return factorization_from_dict(read_json(path), str(path))


def save_factorization(path: PathLike, f: InputFactorization):
    write_json(path, factorization_to_dict(f))


# Regions

def region_to_dict(s: IneqSystem, kind: Optional[str] = None, note: Optional[str] = None) -> Dict[str, Any]:
    data = {
        'coords': list(s.coords),
        'nonneg': list(s.nonneg),
        'rows': [{'label': label, 'coeffs': [_round(c) for c in row], 'rhs': _round(rhs)}
                 for label, row, rhs in zip(s.labels, s.A, s.b)],
    }
    if kind:
        data['kind'] = kind
    if note:
        data['note'] = note
    return data


def region_from_dict(data: Dict[str, Any], source: str = '<region>') -> IneqSystem:
    try:
        coords = data['coords']
        rows = data['rows']
        return IneqSystem(tuple(coords),
                          np.array([row['coeffs'] for row in rows], dtype=float).reshape(-1, len(coords)),
                          np.array([row['rhs'] for row in rows], dtype=float),
                          tuple(data.get('nonneg') or [True] * len(coords)),
                          tuple(row.get('label', f"r{i + 1}") for i, row in enumerate(rows)))
    except (KeyError, TypeError) as e:
        raise ValidationError(f"{source}: malformed region ({e})") from e
    except ValidationError as e:
        raise ValidationError(f"{source}: {e}") from e


def region_to_frame(s: IneqSystem) -> pd.DataFrame:
    """Columns follow the coordinates, then rhs; row labels live in the JSON twin."""
    frame = pd.DataFrame(s.A, columns=list(s.coords))
    frame['rhs'] = s.b
    return frame


def write_region_csv(path: PathLike, s: IneqSystem):
    region_to_frame(s).to_csv(path, index=False, float_format='%.12g')


def read_region_csv(path: PathLike) -> IneqSystem:
    """Read <coords...>, rhs; a leading label column is accepted too."""
    try:
        frame = pd.read_csv(path, dtype={'label': str}, keep_default_na=False)
    except FileNotFoundError:
        raise UsageError(f"{path}: file not found")
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise ValidationError(f"{path}: cannot parse region CSV ({e})")
    labelled = len(frame.columns) > 0 and frame.columns[0] == 'label'
    coords = [c for c in frame.columns[1 if labelled else 0:] if c != 'rhs']
    if 'rhs' not in frame.columns or frame.columns[-1] != 'rhs' or not coords:
        raise ValidationError(f"{path}: region CSV needs columns <coords...>, rhs")
    try:
        A = frame[coords].to_numpy(dtype=float).reshape(-1, len(coords))
        b = frame['rhs'].to_numpy(dtype=float)
    except ValueError as e:
        raise ValidationError(f"{path}: non-numeric coefficient ({e})")
    labels = tuple(frame['label']) if labelled else ()
    return _with_source(str(path), IneqSystem, tuple(coords), A, b, (), labels)


def write_region(base: PathLike, s: IneqSystem, kind: Optional[str] = None,
                 note: Optional[str] = None) -> List[str]:
    """Write <base>.csv and <base>.json; returns both paths."""
    base = Path(base)
    if base.suffix in ('.csv', '.json'):
        base = base.with_suffix('')
    csv_path, json_path = base.with_suffix('.csv'), base.with_suffix('.json')
    write_region_csv(csv_path, s)
    write_json(json_path, region_to_dict(s, kind, note))
    logging.debug(f"Wrote region with {len(s)} rows to {csv_path} and {json_path}")
    return [str(csv_path), str(json_path)]


def read_region(path: PathLike) -> IneqSystem:
    """Read a region file; an unlabelled CSV borrows row labels from its JSON twin when they agree."""
    path = Path(path)
    if path.suffix == '.csv':
        s = read_region_csv(path)
        twin = path.with_suffix('.json')
        if s.labels == tuple(f"r{i + 1}" for i in range(len(s))) and twin.exists():
            try:
                other = region_from_dict(read_json(twin), str(twin))
            except IcckitError as e:
                logging.debug(f"Ignoring labels from {twin}: {e}")
                return s
            if (other.coords == s.coords and other.A.shape == s.A.shape
                    and np.allclose(other.A, s.A) and np.allclose(other.b, s.b)):
                return IneqSystem(s.coords, s.A, s.b, other.nonneg, other.labels)
        return s
    if path.suffix == '.json':
        return region_from_dict(read_json(path), str(path))
    raise UsageError(f"{path}: region files end in .csv or .json")


# Simulation configs

def sim_config_from_dict(data: Dict[str, Any], base_dir: PathLike = '.', source: str = '<config>') -> SimConfig:
    """
    Parse {"channel", "dist", "rates", "blocklengths", "trials", "epsilon", "seed", "typicality"}.

    "channel" and "dist" may be inline objects or paths relative to base_dir.
    """
    base_dir = Path(base_dir)
    missing = [key for key in ('channel', 'dist', 'rates', 'blocklengths', 'trials') if key not in data]
    if missing:
        raise ValidationError(f"{source}: missing keys {', '.join(missing)}")

    channel = data['channel']
    if isinstance(channel, str):
        ch, d = load_channel(base_dir / channel)
    else:
        ch, d = channel_from_dict(channel, f"{source}:channel")
    dist = data['dist']
    if isinstance(dist, str):
        f = load_factorization(base_dir / dist)
    else:
        f = factorization_from_dict(dist, f"{source}:dist")

    rates = data['rates']
    if isinstance(rates, list):
        rates = dict(zip(RATE_NAMES, rates))
    return _with_source(source, lambda: SimConfig(
        channel=ch, factorization=f, rates=dict(rates), blocklengths=tuple(data['blocklengths']),
        trials=int(data['trials']), epsilon=float(data.get('epsilon', 0.1)),
        seed=int(data.get('seed', 0)), typicality=data.get('typicality', 'weak'), deterministic=d))


def load_sim_config(path: PathLike) -> SimConfig:
    path = Path(path)
    return sim_config_from_dict(read_json(path), path.parent, str(path))


# Manifests

@dataclass
class RunManifest:
    """What a command read, wrote and ran with; no timestamps, so reruns match byte for byte."""
    command: str
    inputs: List[str] = field(default_factory=list)
    outputs: List[str] = field(default_factory=list)
    seed: Optional[int] = None
    tolerances: Dict[str, float] = field(default_factory=dict)
    parameters: Dict[str, Any] = field(default_factory=dict)
    version: str = TOOL_VERSION

    def write(self, base: PathLike) -> str:
        path = Path(f"{Path(base).with_suffix('')}.manifest.json")
        write_json(path, asdict(self))
        return str(path)
