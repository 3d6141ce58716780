import json
import os
from pathlib import Path
from typing import Any, Dict

import yaml
from dotenv import dotenv_values

from src.exceptions import ConfigError


def get_str_env(name: str, default: str = "") -> str:
    val = os.getenv(name)
    return default if val is None else str(val).strip()


def normalize_key(key: str) -> str:
    """``--max-vertices`` / ``MAX_VERTICES`` / ``max-vertices`` -> ``max_vertices``."""
    return str(key).strip().lstrip("-").replace("-", "_").lower()


def process_dict(config: Dict[str, Any]) -> Dict[str, Any]:
    """Recursively normalize the keys of a configuration mapping."""
    if not config:
        return {}
    result = {}
    for key, value in config.items():
        if isinstance(value, dict):
            result[normalize_key(key)] = process_dict(value)
        else:
            result[normalize_key(key)] = value
    return result


_config_cache: Dict[str, Dict[str, Any]] = {}


def load_yaml_config(file_path: str) -> Dict[str, Any]:
    """Load and process YAML configuration file."""
    # A missing file means no overrides.
    if not os.path.exists(file_path):
        return {}

    if file_path in _config_cache:
        return _config_cache[file_path]

    with open(file_path, "r", encoding="utf-8") as f:
        try:
            config = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"Invalid YAML in {file_path}: {e}") from e
    if config is not None and not isinstance(config, dict):
        raise ConfigError(f"Top level of {file_path} must be a mapping")
    processed_config = process_dict(config or {})

    _config_cache[file_path] = processed_config
    return processed_config


def load_kv_config(file_path: str) -> Dict[str, Any]:
    """Load a flat ``key=value`` file. Values stay strings; ``os.environ`` is untouched."""
    values = dotenv_values(file_path)
    missing = [k for k, v in values.items() if v is None]
    if missing:
        raise ConfigError(f"Keys without a value in {file_path}: {', '.join(missing)}")
    return process_dict(dict(values))


def load_json_config(file_path: str) -> Dict[str, Any]:
    with open(file_path, "r", encoding="utf-8") as f:
        try:
            config = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"Invalid JSON in {file_path}: {e}") from e
    if not isinstance(config, dict):
        raise ConfigError(f"Top level of {file_path} must be an object")
    return process_dict(config)


def load_config_file(file_path: str | Path) -> Dict[str, Any]:
    """Load an experiment config in any of the supported forms, chosen by suffix.

    ``.json`` is structured JSON, ``.yaml``/``.yml`` is YAML, anything else is read as
    flat ``key=value`` text.
    """
    path = Path(file_path)
    if not path.is_file():
        raise ConfigError(f"Config file not found: {path}")
    suffix = path.suffix.lower()
    if suffix == ".json":
        return load_json_config(str(path))
    if suffix in {".yaml", ".yml"}:
        return load_yaml_config(str(path))
    return load_kv_config(str(path))
