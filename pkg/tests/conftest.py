"""
Pytest configuration and shared fixtures for all tests.
"""

import math
import os
import sys

import pytest

# Add the project root to sys.path to ensure app package is discoverable
sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), "..")))

# Set test environment variables before importing app modules
os.environ.update(
    {
        "ENVIRONMENT": "testing",
        "DEBUG": "True",
        "LOG_LEVEL": "DEBUG",
        "CELERY_BROKER_URL": "memory://localhost/",
        "CELERY_RESULT_BACKEND": "cache+memory://",
        "CELERY_TASK_ALWAYS_EAGER": "True",
        "SWEEP_WORKERS": "1",
        "SWEEP_BACKEND": "local",
    }
)

# Clear the settings cache before importing anything else from app
from app.config.settings import get_settings

get_settings.cache_clear()


@pytest.fixture(scope="session", autouse=True)
def setup_test_environment():
    """Set up test environment variables and configuration."""
    get_settings.cache_clear()

    yield

    get_settings.cache_clear()


@pytest.fixture(autouse=True)
def clear_settings_cache():
    """Clear settings cache before each test to ensure fresh config."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def test_settings():
    """Provide test-specific settings instance."""
    from app.config.settings import Settings

    return Settings()


@pytest.fixture
def half_layout():
    """Piers at +-pi/2."""
    from app.core.density import PierLayout

    return PierLayout(0.5)


@pytest.fixture
def unit_density():
    from app.core.density import homogeneous

    return homogeneous()


@pytest.fixture
def heavy_center():
    """Two-step density alpha=1/2, beta=2 with beta around x=0."""
    from app.core.density import make_two_step

    return make_two_step(0.5, 2.0, "heavy")


@pytest.fixture
def bang_bang_density():
    """alpha=1/2, beta=2 heavy on two half-beam intervals (three jumps)."""
    from app.core.density import from_indicator

    heavy = math.pi / 3.0
    return from_indicator(0.5, 2.0, [(0.0, 0.4 * heavy), (0.8, 0.8 + 0.6 * heavy)])


@pytest.fixture
def output_dir(tmp_path):
    path = tmp_path / "out"
    path.mkdir()
    return path
