"""
RunConfig resolution: command-line flags override the YAML config file,
which overrides the defaults.

The config file is a flat YAML mapping keyed by RunConfig field names::

    fixations: data/fixations.csv
    aoi_map: data/aoi_map.txt
    stages: data/stages.csv
    alpha: 0.5
    gap_ms: 300
    group_by: [participant, role, stage]
    formats: csv,json
"""

from dataclasses import fields
from pathlib import Path
from typing import Any, Dict, Mapping, Optional

import yaml

from gazetna.gtna import GazeTna
from gazetna.ir.run_config import RunConfig

_PATHS = ('fixations', 'aoi_map', 'stages', 'output_dir')
_LISTS = ('group_by', 'formats')
_BOOLS = ('entropy_renormalize', 'entropy_include_self', 'smooth_empty_rows', 'full_precision')
_FLOATS = ('alpha', 'min_prob', 'motif_threshold')
_INTS = ('gap_ms', 'workers', 'seed')

KNOWN_KEYS = tuple(f.name for f in fields(RunConfig))


def load_config_file(path: Optional[Path]) -> Dict[str, Any]:
    if path is None:
        return {}
    try:
        with open(path, encoding='utf-8') as stream:
            document = yaml.safe_load(stream)
    except OSError as e:
        raise GazeTna.ConfigError(f'Sorry, I can\'t read config file {path}: {e.strerror}')
    except yaml.YAMLError as e:
        raise GazeTna.ConfigError(f'Malformed config file {path}: {e}')
    if document is None:
        return {}
    if not isinstance(document, dict):
        raise GazeTna.ConfigError(f'Config file {path} must hold a mapping of settings')
    unknown = sorted(set(document) - set(KNOWN_KEYS))
    if unknown:
        raise GazeTna.ConfigError(f'Sorry, I can\'t recognize config keys: {", ".join(map(str, unknown))}')
    return document


def _coerce(key: str, value: Any) -> Any:
    if value is None:
        return None
    try:
        if key in _PATHS:
            return Path(value)
        if key in _LISTS:
            if isinstance(value, str):
                value = value.split(',')
            return tuple(str(item).strip() for item in value if str(item).strip())
        if key in _BOOLS:
            if isinstance(value, str):
                lowered = value.strip().lower()
                if lowered not in ('true', 'false', 'yes', 'no', '1', '0'):
                    raise ValueError(value)
                return lowered in ('true', 'yes', '1')
            return bool(value)
        if key in _FLOATS:
            return float(value)
        if key in _INTS:
            return int(value)
    except (TypeError, ValueError):
        raise GazeTna.ConfigError(f'Sorry, I can\'t use {value!r} for setting {key}')
    return value


def resolve_config(flags: Mapping[str, Any], config_path: Optional[Path] = None,
                   defaults: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """
    ``defaults`` are command-specific defaults layered over RunConfig's own;
    flags that are None count as not given.
    """
    values: Dict[str, Any] = {}
    for layer in (defaults or {}, load_config_file(config_path), flags):
        for key, value in layer.items():
            if key in KNOWN_KEYS and value is not None:
                values[key] = _coerce(key, value)
    return RunConfig(**values)


def check_inputs(config: RunConfig, require_fixations: bool = True):
    if require_fixations and config.fixations is None:
        raise GazeTna.ConfigError('No fixation log given (--fixations or "fixations" in the config file)')
    for name in ('fixations', 'aoi_map', 'stages'):
        path = getattr(config, name)
        if path is not None and not Path(path).is_file():
            raise GazeTna.ConfigError(f'Sorry, I can\'t read {name} file: {path}')
