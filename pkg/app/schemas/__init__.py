"""Models package initialization and exports."""

# Records written to CSV and compared against reference tables
from app.schemas.records import (
    ComparisonRow,
    DensityRecord,
    MaterialCell,
    PairRow,
    ReferenceCell,
    ReferenceSet,
    ReferenceTable,
    SpectrumRow,
    SweepCell,
    SweepRow,
)

# Run configuration
from app.schemas.run import RunConfig

__all__ = [
    # Records
    "DensityRecord",
    "SpectrumRow",
    "PairRow",
    "SweepCell",
    "SweepRow",
    "MaterialCell",
    "ReferenceCell",
    "ReferenceTable",
    "ReferenceSet",
    "ComparisonRow",
    # Run configuration
    "RunConfig",
]
