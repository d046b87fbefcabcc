"""
Toolkit settings using Pydantic for type safety and validation.
Supports multiple environments with YAML configuration files.
"""

import os
from functools import lru_cache
from pathlib import Path

import yaml
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from app.utils.constants import (
    DEFAULT_GALERKIN_ORDER,
    DEFAULT_MODE_COUNT,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_SCAN_STEP,
    DETERMINANT_GLUING,
    DETERMINANT_REDUCED,
    DRIFT_TOLERANCE,
    FIXED_POINT_TOLERANCE,
    LEVEL_TOLERANCE,
    MARGINAL_BAND,
    MAX_SCAN_MU,
    MAX_TRANSFER_PERIODS,
    MONODROMY_MAX_REFINEMENTS,
    MONODROMY_STEPS,
    MONODROMY_TOLERANCE,
    NEAR_TIE_FRACTION,
    OPTIMIZER_ITERATIONS,
    ORBIT_DRIFT_TOLERANCE,
    ORBIT_RTOL,
    PROFILE_SAMPLES,
    RECORD_EVERY,
    ROOT_TOLERANCE,
    SIGNIFICANT_DIGITS,
    SIMPLICITY_GAP,
    STEPS_PER_PERIOD,
    SWEEP_BACKEND_CELERY,
    SWEEP_BACKEND_LOCAL,
    TRANSFER_GROWTH_TARGET,
)


class SpectrumSettings(BaseSettings):
    """Root bracketing and Galerkin truncation."""

    scan_step: float = Field(default=DEFAULT_SCAN_STEP, gt=0, alias="SPECTRUM_SCAN_STEP")
    mu_ceiling: float = Field(default=MAX_SCAN_MU, gt=0, alias="SPECTRUM_MU_CEILING")
    root_tolerance: float = Field(default=ROOT_TOLERANCE, gt=0, alias="SPECTRUM_ROOT_TOLERANCE")
    simplicity_gap: float = Field(default=SIMPLICITY_GAP, gt=0, alias="SPECTRUM_SIMPLICITY_GAP")
    determinant: str = Field(default=DETERMINANT_GLUING, alias="SPECTRUM_DETERMINANT")
    galerkin_order: int = Field(default=DEFAULT_GALERKIN_ORDER, ge=12, alias="SPECTRUM_GALERKIN_ORDER")
    mode_count: int = Field(default=DEFAULT_MODE_COUNT, ge=2, alias="SPECTRUM_MODE_COUNT")

    @field_validator("determinant")
    @classmethod
    def validate_determinant(cls, v):
        """Validate the determinant formulation."""
        valid = [DETERMINANT_GLUING, DETERMINANT_REDUCED]
        if v not in valid:
            raise ValueError(f"Determinant must be one of: {valid}")
        return v

    model_config = SettingsConfigDict(case_sensitive=False, extra="forbid")


class StabilitySettings(BaseSettings):
    """Duffing orbit and Hill monodromy integration."""

    marginal_band: float = Field(default=MARGINAL_BAND, gt=0, alias="STABILITY_MARGINAL_BAND")
    monodromy_steps: int = Field(default=MONODROMY_STEPS, ge=64, alias="STABILITY_MONODROMY_STEPS")
    monodromy_tolerance: float = Field(
        default=MONODROMY_TOLERANCE, gt=0, alias="STABILITY_MONODROMY_TOLERANCE"
    )
    max_refinements: int = Field(
        default=MONODROMY_MAX_REFINEMENTS, ge=1, alias="STABILITY_MAX_REFINEMENTS"
    )
    orbit_rtol: float = Field(default=ORBIT_RTOL, gt=0, alias="STABILITY_ORBIT_RTOL")
    orbit_drift: float = Field(default=ORBIT_DRIFT_TOLERANCE, gt=0, alias="STABILITY_ORBIT_DRIFT")
    near_tie: float = Field(default=NEAR_TIE_FRACTION, ge=0, alias="STABILITY_NEAR_TIE")

    model_config = SettingsConfigDict(case_sensitive=False, extra="forbid")


class OptimizerSettings(BaseSettings):
    """Level-set rebalancing iteration."""

    iterations: int = Field(default=OPTIMIZER_ITERATIONS, ge=0, alias="OPTIMIZER_ITERATIONS")
    profile_samples: int = Field(default=PROFILE_SAMPLES, ge=2048, alias="OPTIMIZER_PROFILE_SAMPLES")
    level_tolerance: float = Field(default=LEVEL_TOLERANCE, gt=0, alias="OPTIMIZER_LEVEL_TOLERANCE")
    fixed_point_tolerance: float = Field(
        default=FIXED_POINT_TOLERANCE, gt=0, alias="OPTIMIZER_FIXED_POINT_TOLERANCE"
    )
    early_exit: bool = Field(default=False, alias="OPTIMIZER_EARLY_EXIT")

    model_config = SettingsConfigDict(case_sensitive=False, extra="forbid")


class EvolutionSettings(BaseSettings):
    """Time integration of the modal system."""

    steps_per_period: int = Field(default=STEPS_PER_PERIOD, ge=16, alias="EVOLUTION_STEPS_PER_PERIOD")
    drift_tolerance: float = Field(default=DRIFT_TOLERANCE, gt=0, alias="EVOLUTION_DRIFT_TOLERANCE")
    record_every: int = Field(default=RECORD_EVERY, ge=1, alias="EVOLUTION_RECORD_EVERY")
    max_periods: int = Field(default=MAX_TRANSFER_PERIODS, ge=1, alias="EVOLUTION_MAX_PERIODS")
    growth_target: float = Field(default=TRANSFER_GROWTH_TARGET, gt=1, alias="EVOLUTION_GROWTH_TARGET")

    model_config = SettingsConfigDict(case_sensitive=False, extra="forbid")


class SweepSettings(BaseSettings):
    """Parallel sweep execution."""

    workers: int = Field(default=1, ge=1, alias="SWEEP_WORKERS")
    backend: str = Field(default=SWEEP_BACKEND_LOCAL, alias="SWEEP_BACKEND")

    @field_validator("backend")
    @classmethod
    def validate_backend(cls, v):
        """Validate the sweep backend."""
        valid = [SWEEP_BACKEND_LOCAL, SWEEP_BACKEND_CELERY]
        if v not in valid:
            raise ValueError(f"Sweep backend must be one of: {valid}")
        return v

    model_config = SettingsConfigDict(case_sensitive=False, extra="forbid")


class CelerySettings(BaseSettings):
    """Celery configuration for distributed sweeps."""

    broker_url: str = Field(default="redis://localhost:6379/1", alias="CELERY_BROKER_URL")
    result_backend: str = Field(default="redis://localhost:6379/2", alias="CELERY_RESULT_BACKEND")
    task_serializer: str = Field(default="json", alias="CELERY_TASK_SERIALIZER")
    result_serializer: str = Field(default="json", alias="CELERY_RESULT_SERIALIZER")
    accept_content: list[str] = Field(default=["json"], alias="CELERY_ACCEPT_CONTENT")
    worker_concurrency: int = Field(default=4, alias="CELERY_WORKER_CONCURRENCY")
    task_max_retries: int = Field(default=2, alias="CELERY_TASK_MAX_RETRIES")
    result_timeout: float = Field(default=3600.0, alias="CELERY_RESULT_TIMEOUT")
    task_always_eager: bool = Field(default=False, alias="CELERY_TASK_ALWAYS_EAGER")

    model_config = SettingsConfigDict(case_sensitive=False, extra="forbid")


class OutputSettings(BaseSettings):
    """CSV and report emission."""

    directory: str = Field(default=DEFAULT_OUTPUT_DIR, alias="OUTPUT_DIRECTORY")
    significant_digits: int = Field(default=SIGNIFICANT_DIGITS, ge=6, le=17, alias="OUTPUT_SIGNIFICANT_DIGITS")

    model_config = SettingsConfigDict(case_sensitive=False, extra="forbid")


class Settings(BaseSettings):
    """Main toolkit settings."""

    # Application
    environment: str = Field(default="development", alias="ENVIRONMENT")
    debug: bool = Field(default=False, alias="DEBUG")

    # Logging
    log_level: str = Field(default="INFO", alias="LOG_LEVEL")
    log_format: str = Field(default="json", alias="LOG_FORMAT")
    log_file: str | None = Field(default=None, alias="LOG_FILE")

    # Subsystem configurations (lazy loading to avoid env var issues)
    spectrum: SpectrumSettings = Field(default_factory=lambda: SpectrumSettings())
    stability: StabilitySettings = Field(default_factory=lambda: StabilitySettings())
    optimizer: OptimizerSettings = Field(default_factory=lambda: OptimizerSettings())
    evolution: EvolutionSettings = Field(default_factory=lambda: EvolutionSettings())
    sweep: SweepSettings = Field(default_factory=lambda: SweepSettings())
    celery: CelerySettings = Field(default_factory=lambda: CelerySettings())
    output: OutputSettings = Field(default_factory=lambda: OutputSettings())

    @field_validator("environment")
    @classmethod
    def validate_environment(cls, v):
        """Validate environment value."""
        valid_environments = ["development", "production", "testing"]
        if v not in valid_environments:
            raise ValueError(f"Environment must be one of: {valid_environments}")
        return v

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        """Validate log level."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Log level must be one of: {valid_levels}")
        return v.upper()

    @field_validator("log_format")
    @classmethod
    def validate_log_format(cls, v):
        """Validate log format."""
        if v not in ("json", "plain"):
            raise ValueError("Log format must be 'json' or 'plain'")
        return v

    model_config: SettingsConfigDict = {
        "env_file": (".env.test" if os.getenv("ENVIRONMENT") == "testing" else ".env"),
        "env_file_encoding": "utf-8",
        "case_sensitive": False,
        "populate_by_name": True,
        "extra": "ignore",
    }


def load_yaml_config(config_path: Path) -> dict:
    """Load configuration from YAML file."""
    try:
        with open(config_path, encoding="utf-8") as f:
            return yaml.safe_load(f) or {}
    except FileNotFoundError:
        return {}
    except yaml.YAMLError as e:
        raise ValueError(f"Invalid YAML configuration: {e}")


def get_config_path() -> Path:
    """Get configuration file path based on environment."""
    env = os.getenv("ENVIRONMENT", "development")
    config_dir = Path(__file__).parent.parent.parent / "config"
    return config_dir / f"{env}.yaml"


@lru_cache
def get_settings() -> Settings:
    """
    Get toolkit settings with caching.
    Combines environment variables with YAML configuration.
    """
    yaml_config = load_yaml_config(get_config_path())

    # Flatten nested YAML structure for Pydantic
    settings_dict = {}
    for key, value in yaml_config.items():
        if isinstance(value, dict):
            for subkey, subvalue in value.items():
                settings_dict[f"{key}_{subkey}".upper()] = subvalue
        else:
            settings_dict[key.upper()] = value

    # Environment variables win over YAML values
    for key, value in settings_dict.items():
        if key not in os.environ:
            os.environ[key] = str(value)

    return Settings()


def get_test_settings(**overrides) -> Settings:
    """
    Get settings for testing without caching.
    Allows for per-test configuration overrides.

    Args:
        **overrides: Environment-style keys (e.g. SPECTRUM_GALERKIN_ORDER="18")

    Returns:
        Fresh Settings instance without caching
    """
    test_env = {
        "ENVIRONMENT": "testing",
        "DEBUG": "True",
        **overrides,
    }

    original_env = {}
    for key, value in test_env.items():
        original_env[key] = os.environ.get(key)
        os.environ[key] = str(value)

    try:
        return Settings()
    finally:
        for key, value in original_env.items():
            if value is None:
                os.environ.pop(key, None)
            else:
                os.environ[key] = value
