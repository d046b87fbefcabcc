"""
Run configuration from command-line flags and key = value config files.
"""

import argparse
import logging
import os
from pathlib import Path

from pydantic import ValidationError

from app.config.settings import Settings, get_settings
from app.schemas.run import RunConfig
from app.utils.error_handlers import ConfigurationError

logger = logging.getLogger(__name__)

# RunConfig fields that map onto environment settings
SETTINGS_OVERRIDES = {
    "n": "SPECTRUM_GALERKIN_ORDER",
    "count": "SPECTRUM_MODE_COUNT",
    "determinant": "SPECTRUM_DETERMINANT",
    "root_tolerance": "SPECTRUM_ROOT_TOLERANCE",
    "iterations": "OPTIMIZER_ITERATIONS",
    "workers": "SWEEP_WORKERS",
    "backend": "SWEEP_BACKEND",
    "drift_tolerance": "EVOLUTION_DRIFT_TOLERANCE",
    "output": "OUTPUT_DIRECTORY",
}


def parse_config_file(path: str | Path) -> dict[str, str]:
    """
    Read `key = value` lines; `#` starts a comment, blank lines are skipped.

    Raises:
        ConfigurationError: Unreadable file, malformed line or unknown key.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigurationError(f"Cannot read config file {path}: {e}") from e

    values: dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or not key:
            raise ConfigurationError(f"{path}:{number}: expected 'key = value', got {raw!r}")
        if key == "subcommand" or key not in RunConfig.model_fields:
            raise ConfigurationError(f"{path}:{number}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """
    Merge parsed flags with the optional config file; file values win.

    Raises:
        ConfigurationError: Invalid values, reported with the failing fields.
    """
    data = {
        key: value
        for key, value in vars(args).items()
        if key in RunConfig.model_fields and value is not None
    }
    config_file = getattr(args, "config", None)
    if config_file:
        data.update(parse_config_file(config_file))
    try:
        return RunConfig.model_validate(data)
    except ValidationError as e:
        problems = "; ".join(f"{'.'.join(map(str, err['loc'])) or 'config'}: {err['msg']}" for err in e.errors())
        raise ConfigurationError(f"Invalid run configuration: {problems}") from e


def apply_settings_overrides(config: RunConfig) -> Settings:
    """
    Export the config's settings overrides as environment variables and
    reload the settings.

    Sweep worker processes inherit the environment, so they see the same
    overrides.
    """
    for field_name, env_name in SETTINGS_OVERRIDES.items():
        value = getattr(config, field_name)
        if value is not None:
            os.environ[env_name] = str(value)
    get_settings.cache_clear()
    return get_settings()
