"""
Unit tests for CSV report emission.
"""

import numpy as np
import pandas as pd
import pytest

from app.core.evolution import ModalState, simulate
from app.core.optimizer import GProfile
from app.schemas.records import PairRow, SpectrumRow
from app.services.reporting import ReportWriter, records_frame, trajectory_frame
from app.utils.error_handlers import ConfigurationError


@pytest.fixture
def writer(output_dir):
    return ReportWriter(output_dir)


def test_records_frame_renames_lambda():
    rows = [SpectrumRow(index=1, parity="even", lam=2.5, norm_check=0.0)]
    frame = records_frame(rows)
    assert "lambda" in frame.columns
    assert "lam" not in frame.columns


def test_records_frame_column_selection():
    rows = [SpectrumRow(index=1, parity="odd", mu=2.0, lam=16.0, norm_check=1e-15)]
    frame = records_frame(rows, ["index", "lam"])
    assert list(frame.columns) == ["index", "lambda"]


def test_writes_twelve_significant_digits(writer):
    """Floats carry 12 significant digits and missing values are empty."""
    rows = [SpectrumRow(index=1, parity="even", lam=1.0 / 3.0, norm_check=0.0)]
    path = writer.write_records("spectrum.csv", rows)

    lines = path.read_text().splitlines()
    assert lines[0] == "index,parity,mu,lambda,norm_check,a"
    assert lines[1] == "1,even,,0.333333333333,0,"


def test_output_is_deterministic(writer):
    rows = [
        PairRow(j=1, lam=2.4375, nu=16.0, ratio=16 / 2.4375, amplitude=np.sqrt(27.125), energy=217.0, parities="even/odd")
    ]
    first = writer.write_records("a.csv", rows).read_bytes()
    second = writer.write_records("b.csv", rows).read_bytes()
    assert first == second


def test_trajectory_columns(writer):
    state = ModalState(positions=np.array([0.5, 1e-4]), velocities=np.zeros(2), eigenvalues=np.array([1.0, 3.0]))
    trajectory = simulate(state, 5.0)
    frame = trajectory_frame(trajectory)

    assert list(frame.columns) == ["t", "c_1", "c_2", "cdot_1", "cdot_2", "E_total", "E_mode_1", "E_mode_2"]
    path = writer.write_trajectory("trajectory.csv", trajectory)
    assert len(pd.read_csv(path)) == len(trajectory.times)


def test_profile_csv(writer):
    x = np.linspace(0.0, np.pi, 5)
    profile = GProfile(x=x, values=np.cos(x), pair_index=1, parities=("even", "odd"), a=0.5)
    frame = pd.read_csv(writer.write_profile("profile.csv", profile))
    assert list(frame.columns) == ["x", "g"]
    assert frame["g"].iloc[0] == 1.0


def test_unwritable_directory(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(ConfigurationError):
        ReportWriter(blocker / "sub")
