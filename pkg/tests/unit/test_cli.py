"""
Unit tests for the command line: parsing, configuration and exit codes.
"""

import os

import pandas as pd
import pytest

from app.cli.common import use_exact_solver
from app.cli.config import build_run_config, parse_config_file
from app.cli.parser import build_parser
from app.main import main
from app.schemas.run import RunConfig
from app.utils.error_handlers import ConfigurationError


@pytest.fixture(autouse=True)
def restore_environment():
    """Subcommands export their overrides; undo that after each test."""
    saved = dict(os.environ)
    yield
    os.environ.clear()
    os.environ.update(saved)


def parse(argv):
    return build_run_config(build_parser().parse_args(argv))


def test_fractions_and_grid():
    config = parse(["threshold", "--density", "two-step-heavy", "--alpha", "1/3", "--beta", "5/2", "--a-grid", "0.35, 0.4 0.45"])

    assert config.alpha == pytest.approx(1 / 3)
    assert config.beta == 2.5
    assert config.a_grid == [0.35, 0.4, 0.45]


def test_config_file_overrides_flags(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("# sweep settings\nalpha = 1/2\nbeta = 2   # heavy\n\ndensity = two-step-light\n")
    config = parse(["threshold", "--alpha", "1/3", "--beta", "3", "--config", str(path)])

    assert (config.alpha, config.beta, config.density) == (0.5, 2.0, "two-step-light")


def test_config_file_unknown_key(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("alpah = 1/2\n")
    with pytest.raises(ConfigurationError, match="unknown key"):
        parse_config_file(path)


def test_config_file_malformed_line(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("alpha 1/2\n")
    with pytest.raises(ConfigurationError, match="expected"):
        parse_config_file(path)


@pytest.mark.parametrize(
    "argv",
    [
        ["threshold", "--a", "1.2"],
        ["threshold", "--density", "two-step-heavy", "--alpha", "3/2", "--beta", "2"],
        ["threshold", "--a-grid", "0.3 1.0"],
        ["simulate", "--dt", "0"],
        ["simulate", "--dt", "-0.01"],
        ["reproduce"],
        ["spectrum", "--n", "8"],
    ],
)
def test_invalid_configuration_exit_code(argv, tmp_path):
    """Invalid parameters exit with code 2 before any computation."""
    assert main([*argv, "--output", str(tmp_path)]) == 2


def test_invalid_choice_rejected_by_parser():
    with pytest.raises(SystemExit) as excinfo:
        build_parser().parse_args(["reproduce", "T9"])
    assert excinfo.value.code == 2


def test_spectrum_command(tmp_path):
    """Homogeneous spectrum at a = 1/2: the second eigenvalue is 16."""
    assert main(["spectrum", "--a", "0.5", "--count", "4", "--solver", "exact", "-o", str(tmp_path)]) == 0

    frame = pd.read_csv(tmp_path / "spectrum.csv")
    assert list(frame.columns) == ["index", "parity", "mu", "lambda", "norm_check"]
    assert len(frame) == 4
    assert frame["lambda"].iloc[1] == pytest.approx(16.0)
    assert frame["norm_check"].abs().max() < 1e-9


def test_spectrum_curve_command(tmp_path):
    argv = ["spectrum", "--a-grid", "0.4 0.6", "--count", "3", "--solver", "exact", "-o", str(tmp_path)]
    assert main(argv) == 0

    frame = pd.read_csv(tmp_path / "spectrum.csv")
    assert sorted(frame["a"].unique()) == [0.4, 0.6]
    assert len(frame) == 6


@pytest.mark.parametrize(
    "solver,n,density,expected",
    [
        ("auto", None, "two-step-heavy", True),
        ("auto", 18, "two-step-heavy", False),
        ("auto", None, "optimize", False),
        ("galerkin", None, "two-step-heavy", False),
        ("exact", 18, "two-step-heavy", True),
    ],
)
def test_use_exact_solver(solver, n, density, expected):
    """An explicit basis size routes the auto solver to Galerkin."""
    config = RunConfig(subcommand="spectrum", alpha=0.5, beta=2.0, density=density, solver=solver, n=n)
    assert use_exact_solver(config) is expected


def test_spectrum_basis_size_override(tmp_path):
    """--n reaches the Galerkin solver and moves eigenvalues by less than 1e-3 relative."""
    base = ["spectrum", "--density", "two-step-heavy", "--alpha", "1/2", "--beta", "2", "--a", "0.5"]
    assert main([*base, "--n", "14", "-o", str(tmp_path / "n14")]) == 0
    assert main([*base, "--n", "18", "-o", str(tmp_path / "n18")]) == 0

    coarse = pd.read_csv(tmp_path / "n14" / "spectrum.csv")
    fine = pd.read_csv(tmp_path / "n18" / "spectrum.csv")
    assert len(fine) == 12
    assert fine["mu"].isna().all()
    relative = (coarse["lambda"] - fine["lambda"]).abs() / fine["lambda"]
    assert relative.max() < 1e-3
    assert (coarse["lambda"] != fine["lambda"]).any()


@pytest.mark.slow
def test_threshold_command(tmp_path):
    assert main(["threshold", "--a", "0.5", "-o", str(tmp_path)]) == 0

    frame = pd.read_csv(tmp_path / "threshold.csv")
    assert len(frame) == 11
    minimum = frame[frame["is_minimum"]]
    assert minimum["j"].tolist() == [1]
    assert minimum["energy"].iloc[0] / 100 == pytest.approx(2.17, rel=0.02)


@pytest.mark.slow
def test_profile_command(tmp_path):
    assert main(["profile", "--a", "0.5", "--samples", "2048", "-o", str(tmp_path)]) == 0

    frame = pd.read_csv(tmp_path / "profile.csv")
    assert list(frame.columns) == ["x", "g"]
    assert frame["g"].iloc[0] > 0


@pytest.mark.slow
def test_simulate_command(tmp_path):
    argv = ["simulate", "--a", "0.5", "--periods", "2", "--zeta-rel", "0.5", "-o", str(tmp_path)]
    assert main(argv) == 0

    frame = pd.read_csv(tmp_path / "trajectory.csv")
    assert {"t", "c_1", "c_2", "E_total", "E_mode_2"} <= set(frame.columns)
    energy = frame["E_total"]
    assert (energy - energy.iloc[0]).abs().max() / energy.iloc[0] < 1e-6
