"""
Test environment variable loading and configuration.
"""

import logging
import os

import pytest
from pydantic import ValidationError

from app.config.logging import setup_logging
from app.config.settings import get_settings, get_test_settings


def test_environment_variables_loaded():
    """Test that environment variables are properly loaded."""
    settings = get_settings()

    assert settings.environment == "testing"
    assert settings.debug is True


def test_testing_yaml_applied():
    """Values from config/testing.yaml reach the nested sections."""
    settings = get_settings()

    assert settings.log_format == "plain"
    assert settings.sweep.workers == 1
    assert settings.sweep.backend == "local"
    assert settings.celery.task_always_eager is True


def test_numerical_defaults():
    """Unconfigured sections fall back to the library constants."""
    settings = get_settings()

    assert settings.spectrum.determinant == "gluing"
    assert settings.spectrum.mode_count == 12
    assert settings.spectrum.galerkin_order >= 12
    assert settings.output.significant_digits == 12


def test_get_test_settings_with_overrides():
    """Test get_test_settings function with overrides."""
    settings = get_test_settings(SPECTRUM_GALERKIN_ORDER="18", SPECTRUM_DETERMINANT="reduced")

    assert settings.spectrum.galerkin_order == 18
    assert settings.spectrum.determinant == "reduced"
    assert os.getenv("SPECTRUM_GALERKIN_ORDER") is None


@pytest.mark.parametrize(
    "key,value",
    [
        ("SPECTRUM_DETERMINANT", "cofactor"),
        ("SPECTRUM_GALERKIN_ORDER", "8"),
        ("SWEEP_BACKEND", "dask"),
        ("LOG_FORMAT", "xml"),
    ],
)
def test_invalid_values_rejected(key, value):
    with pytest.raises(ValidationError):
        get_test_settings(**{key: value})


def test_settings_cache_cleared():
    """Test that settings cache is properly cleared between tests."""
    settings1 = get_settings()
    settings2 = get_settings()

    assert settings1 is settings2
    assert settings1.environment == "testing"


@pytest.mark.parametrize(
    "env_var,expected",
    [
        ("ENVIRONMENT", "testing"),
        ("DEBUG", "True"),
        ("CELERY_BROKER_URL", "memory://localhost/"),
    ],
)
def test_specific_test_environment_variables(env_var, expected):
    """Test that specific test environment variables are set correctly."""
    assert os.getenv(env_var) == expected


def test_setup_logging_replaces_handlers():
    """Repeated setup leaves a single console handler."""
    setup_logging("WARNING", "testing", "plain")
    setup_logging("DEBUG", "testing", "json")

    root = logging.getLogger()
    assert len(root.handlers) == 1
    assert root.level == logging.DEBUG
    assert logging.getLogger("celery").level == logging.WARNING
