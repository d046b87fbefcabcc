"""
CSV emission for spectra, stability reports, trajectories, profiles and sweeps.
"""

import logging
import os
from collections.abc import Iterable, Sequence
from pathlib import Path

import numpy as np
import pandas as pd
from pydantic import BaseModel

from app.config.settings import OutputSettings, get_settings
from app.core.evolution import Trajectory
from app.core.optimizer import GProfile
from app.utils.error_handlers import ConfigurationError

logger = logging.getLogger(__name__)

# CSV headers use the mathematical names; records use Python-safe ones
_COLUMN_NAMES = {"lam": "lambda"}


def records_frame(rows: Iterable[BaseModel], columns: Sequence[str] | None = None) -> pd.DataFrame:
    """DataFrame from pydantic records, in field order unless columns are given."""
    rows = list(rows)
    frame = pd.DataFrame([row.model_dump() for row in rows])
    if columns is not None:
        frame = frame.reindex(columns=list(columns))
    elif not rows:
        return frame
    return frame.rename(columns=_COLUMN_NAMES)


def trajectory_frame(trajectory: Trajectory) -> pd.DataFrame:
    """Columns t, c_j, cdot_j, E_total and E_mode_j."""
    n = trajectory.positions.shape[1]
    data = {"t": trajectory.times}
    for j in range(n):
        data[f"c_{j + 1}"] = trajectory.positions[:, j]
    for j in range(n):
        data[f"cdot_{j + 1}"] = trajectory.velocities[:, j]
    data["E_total"] = trajectory.energy
    energies = trajectory.mode_energies
    for j in range(n):
        data[f"E_mode_{j + 1}"] = energies[:, j]
    return pd.DataFrame(data)


def profile_frame(profile: GProfile) -> pd.DataFrame:
    return pd.DataFrame({"x": np.asarray(profile.x), "g": np.asarray(profile.values)})


class ReportWriter:
    """
    Writes CSV files under one output directory.

    Every float goes through the same format string, so identical inputs
    give byte-identical files.
    """

    def __init__(self, directory: str | Path | None = None, settings: OutputSettings | None = None):
        settings = settings or get_settings().output
        self.directory = Path(directory or settings.directory)
        self.float_format = f"%.{settings.significant_digits}g"
        self._ensure_directory()

    def _ensure_directory(self) -> None:
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ConfigurationError(f"Cannot create output directory {self.directory}: {e}") from e
        if not os.access(self.directory, os.W_OK):
            raise ConfigurationError(f"Output directory {self.directory} is not writable")

    def path(self, name: str) -> Path:
        return self.directory / name

    def write_frame(self, name: str, frame: pd.DataFrame) -> Path:
        """
        Write a DataFrame as CSV with a header row.

        Args:
            name: File name inside the output directory.
            frame: Data to write.

        Returns:
            Path of the written file.
        """
        target = self.path(name)
        try:
            frame.to_csv(
                target,
                index=False,
                float_format=self.float_format,
                na_rep="",
                lineterminator="\n",
            )
        except OSError as e:
            raise ConfigurationError(f"Cannot write {target}: {e}") from e
        logger.info(f"Wrote {len(frame)} rows to {target}")
        return target

    def write_records(
        self, name: str, rows: Iterable[BaseModel], columns: Sequence[str] | None = None
    ) -> Path:
        return self.write_frame(name, records_frame(rows, columns))

    def write_trajectory(self, name: str, trajectory: Trajectory) -> Path:
        return self.write_frame(name, trajectory_frame(trajectory))

    def write_profile(self, name: str, profile: GProfile) -> Path:
        return self.write_frame(name, profile_frame(profile))
