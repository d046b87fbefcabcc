"""Validated run configuration shared by all subcommands."""

import re
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.utils.constants import (
    BASELINE_TABLE_ID,
    MODE_HOMOGENEOUS,
    MODE_OPTIMIZE,
    TABLE_IDS,
)
from app.utils.validators import parse_number, validate_material_bounds, validate_pier_parameter

Subcommand = Literal["spectrum", "threshold", "reproduce", "simulate", "profile"]
DensityMode = Literal["homogeneous", "two-step-heavy", "two-step-light", "optimize"]

TABLE_CHOICES = (*TABLE_IDS, BASELINE_TABLE_ID, "all")


class RunConfig(BaseModel):
    """
    One invocation of the toolkit.

    Fields left as None fall back to the environment settings.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    subcommand: Subcommand

    # Beam and material
    alpha: float = Field(1.0, description="Lower density bound")
    beta: float = Field(1.0, description="Upper density bound")
    a: float = Field(0.5, description="Pier parameter; piers sit at +-a*pi")
    a_grid: list[float] | None = Field(None, description="Pier positions for curves and sweeps")
    density: DensityMode = MODE_HOMOGENEOUS
    solver: Literal["auto", "exact", "galerkin"] = "auto"

    # Spectrum
    n: int | None = Field(None, ge=12, description="Galerkin basis size per parity")
    count: int | None = Field(None, ge=2, description="Modes entering the threshold")
    determinant: Literal["gluing", "reduced"] | None = None
    root_tolerance: float | None = Field(None, gt=0)

    # Optimizer
    iterations: int | None = Field(None, ge=0)

    # Reproduction
    table: str | None = None
    tolerance: float | None = Field(None, gt=0, description="Relative tolerance replacing the table's own")
    workers: int | None = Field(None, ge=1)
    backend: Literal["local", "celery"] | None = None

    # Simulation and profiles
    pair: int | None = Field(None, ge=1, description="Prevailing mode j of the pair (j, j+1)")
    modes: int | None = Field(None, ge=2, le=12, description="Active modes; None runs the two-mode system")
    zeta_rel: float = Field(1.2, gt=0, description="Prevailing amplitude relative to D")
    z0_rel: float = Field(1e-4, ge=0, description="Residual amplitude relative to zeta")
    periods: float | None = Field(None, gt=0, description="Prevailing-mode periods to simulate")
    t_end: float | None = None
    dt: float | None = None
    drift_tolerance: float | None = Field(None, gt=0)
    samples: int | None = Field(None, ge=2)

    output: str | None = None

    @field_validator("alpha", "beta", "a", mode="before")
    @classmethod
    def parse_fraction(cls, v):
        return parse_number(v)

    @field_validator("a_grid", mode="before")
    @classmethod
    def parse_grid(cls, v):
        """Accept '0.1 0.2', '0.1,0.2' or a list."""
        if isinstance(v, str):
            v = [item for item in re.split(r"[\s,]+", v.strip()) if item]
        if v is None:
            return v
        return [parse_number(item) for item in v]

    @field_validator("table")
    @classmethod
    def validate_table(cls, v):
        if v is not None and v not in TABLE_CHOICES:
            raise ValueError(f"Table must be one of: {list(TABLE_CHOICES)}")
        return v

    @model_validator(mode="after")
    def check_ranges(self):
        if self.density != MODE_HOMOGENEOUS:
            validate_material_bounds(self.alpha, self.beta, allow_homogeneous=self.density == MODE_OPTIMIZE)
        validate_pier_parameter(self.a)
        for a in self.a_grid or ():
            validate_pier_parameter(a)
        if self.a_grid is not None and not self.a_grid:
            raise ValueError("Pier grid must not be empty")
        if self.dt is not None and not self.dt > 0.0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.t_end is not None and not self.t_end > 0.0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")
        if self.subcommand == "reproduce" and self.table is None:
            raise ValueError("reproduce needs a table")
        return self
