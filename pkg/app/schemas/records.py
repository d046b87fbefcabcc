"""Serializable records for densities, spectra, reports and table cells."""

from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.utils.validators import parse_number


class DensityRecord(BaseModel):
    """Structured text form of a density (right half-beam only)."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(..., description="Lower density bound")
    beta: float = Field(..., description="Upper density bound")
    breakpoints: list[float] = Field(default_factory=list, description="Jump abscissae in (0, pi)")
    values: list[float] = Field(..., description="Piece values from x=0 outward")


class SpectrumRow(BaseModel):
    """One eigenvalue of a computed spectrum."""

    index: int = Field(..., ge=1, description="1-based position in the merged ordering")
    parity: str = Field(..., description="even or odd")
    mu: float | None = Field(None, description="Fourth root of lambda (closed-form solver only)")
    lam: float = Field(..., description="Eigenvalue")
    norm_check: float = Field(..., description="Weighted norm of the eigenfunction minus one")
    a: float | None = Field(None, description="Pier parameter, set for eigenvalue curves")


class PairRow(BaseModel):
    """Critical amplitude and energy of one consecutive eigenvalue pair."""

    j: int = Field(..., ge=1, description="Index of the lower eigenvalue")
    lam: float
    nu: float
    ratio: float = Field(..., description="nu / lambda")
    amplitude: float = Field(..., description="Critical amplitude D")
    energy: float = Field(..., description="Critical energy E")
    parities: str = Field(..., description="Parities of the pair, e.g. 'even/odd'")
    is_minimum: bool = False


class SweepRow(BaseModel):
    """Best threshold found at one pier position for one material pair."""

    alpha: float
    beta: float
    a: float
    mode: str
    energy: float | None = Field(None, description="Threshold at this pier position")
    energy_scaled: float | None = Field(None, description="Threshold divided by 10^2")
    ratio_label: str | None = Field(None, description="Minimizing ratio as 'j+1/j'")
    jump_count: int | None = Field(None, description="Jumps of the best density on (0, pi)")
    rho: float | None = Field(None, description="Jump parameter (two-step modes)")
    breakpoints: str = Field("", description="Space-separated breakpoints of the best density")
    center_value: float | None = Field(None, description="p(0) of the best density")
    near_tie: str = Field("", description="Competing pair label when within the tie band")
    status: str = Field("ok", description="ok or the error that stopped this cell")


class MaterialCell(BaseModel):
    """Optimum over pier positions for one material pair."""

    alpha: float
    beta: float
    mode: str
    a_opt: float | None = None
    energy: float | None = None
    energy_scaled: float | None = None
    ratio_label: str | None = None
    jump_count: int | None = None
    rho: float | None = None
    breakpoints: str = ""
    status: str = "ok"


class ReferenceCell(BaseModel):
    """One published table cell."""

    model_config = ConfigDict(frozen=True)

    alpha: float
    beta: float
    a: float | None = Field(None, description="Pier position for per-a tables")
    energy_scaled: float = Field(..., description="Threshold divided by 10^2")
    ratio_label: str | None = None
    a_opt: float | None = None
    rho: float | None = None
    jump_count: int | None = None

    @field_validator("alpha", "beta", mode="before")
    @classmethod
    def parse_fraction(cls, v):
        return parse_number(v)


class ReferenceTable(BaseModel):
    """A published table with provenance."""

    model_config = ConfigDict(frozen=True)

    table_id: str
    provenance: str
    mode: str
    scope: str = Field(..., pattern="^(optimum|per_pier)$", description="Optimum over the pier grid or per-a cells")
    tolerance: float = Field(..., gt=0, description="Relative tolerance on the threshold")
    cells: list[ReferenceCell]

    @property
    def alphas(self) -> list[float]:
        return list(dict.fromkeys(cell.alpha for cell in self.cells))

    @property
    def betas(self) -> list[float]:
        return list(dict.fromkeys(cell.beta for cell in self.cells))


class ReferenceSet(BaseModel):
    """Versioned collection of reference tables."""

    model_config = ConfigDict(frozen=True)

    version: str
    tables: list[ReferenceTable]

    def get(self, table_id: str) -> ReferenceTable:
        for table in self.tables:
            if table.table_id == table_id:
                return table
        raise KeyError(table_id)


class ComparisonRow(BaseModel):
    """Computed versus reference value for one table cell."""

    table_id: str
    alpha: float
    beta: float
    a: float | None = None
    reference_energy_scaled: float
    computed_energy_scaled: float | None = None
    relative_deviation: float | None = None
    tolerance: float
    reference_a_opt: float | None = None
    computed_a_opt: float | None = None
    reference_ratio: str | None = None
    computed_ratio: str | None = None
    reference_jump_count: int | None = None
    computed_jump_count: int | None = None
    reference_rho: float | None = None
    computed_rho: float | None = None
    passed: bool
    detail: str = ""


class SweepCell(BaseModel):
    """One unit of sweep work: a material pair, a pier position and a density mode."""

    model_config = ConfigDict(frozen=True)

    alpha: float
    beta: float
    a: float
    mode: str

    @property
    def key(self) -> tuple[float, float, float, str]:
        return (self.alpha, self.beta, self.a, self.mode)
