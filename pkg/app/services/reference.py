"""
Published reference tables and the comparison of computed cells against them.
"""

import logging
import math
from collections.abc import Sequence
from functools import lru_cache
from pathlib import Path

import yaml
from pydantic import ValidationError

from app.schemas.records import (
    ComparisonRow,
    MaterialCell,
    ReferenceCell,
    ReferenceSet,
    ReferenceTable,
    SweepRow,
)
from app.utils.constants import (
    PIER_MATCH_TOLERANCE,
    REFERENCE_FILE,
    RHO_TOLERANCE,
    SCOPE_OPTIMUM,
)
from app.utils.error_handlers import ConfigurationError

logger = logging.getLogger(__name__)

DATA_DIR = Path(__file__).parent.parent / "data"

Computed = MaterialCell | SweepRow


def load_reference_set(path: Path | None = None) -> ReferenceSet:
    """
    Load and validate the reference tables file.

    Args:
        path: YAML file, defaults to the packaged reference tables.

    Returns:
        The validated ReferenceSet.

    Raises:
        ConfigurationError: File missing, unparsable or invalid.
    """
    path = path or DATA_DIR / REFERENCE_FILE
    try:
        with open(path, encoding="utf-8") as f:
            raw = yaml.safe_load(f) or {}
    except FileNotFoundError as e:
        raise ConfigurationError(f"Reference tables not found: {path}") from e
    except yaml.YAMLError as e:
        raise ConfigurationError(f"Invalid reference tables YAML {path}: {e}") from e
    try:
        reference = ReferenceSet.model_validate(raw)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid reference tables {path}: {e}") from e
    logger.debug(f"Loaded reference tables v{reference.version} from {path}")
    return reference


@lru_cache
def default_reference_set() -> ReferenceSet:
    return load_reference_set()


def get_reference_table(table_id: str, reference: ReferenceSet | None = None) -> ReferenceTable:
    reference = reference or default_reference_set()
    try:
        return reference.get(table_id)
    except KeyError as e:
        known = [t.table_id for t in reference.tables]
        raise ConfigurationError(f"Unknown table {table_id!r}; known tables: {known}") from e


def _same(x: float | None, y: float | None, tolerance: float = PIER_MATCH_TOLERANCE) -> bool:
    return x is not None and y is not None and math.isclose(x, y, rel_tol=0.0, abs_tol=tolerance)


def _find(cell: ReferenceCell, computed: Sequence[Computed], per_pier: bool) -> Computed | None:
    for item in computed:
        if not (_same(item.alpha, cell.alpha) and _same(item.beta, cell.beta)):
            continue
        if per_pier and not _same(getattr(item, "a", None), cell.a):
            continue
        return item
    return None


def compare_cell(table: ReferenceTable, cell: ReferenceCell, computed: Computed | None) -> ComparisonRow:
    """
    Check one computed cell against its published values.

    The threshold must lie within the table tolerance (relative). The
    pier optimum and the jump count must match exactly, rho within the
    printed precision and the ratio label verbatim.
    """
    row = ComparisonRow(
        table_id=table.table_id,
        alpha=cell.alpha,
        beta=cell.beta,
        a=cell.a,
        reference_energy_scaled=cell.energy_scaled,
        tolerance=table.tolerance,
        reference_a_opt=cell.a_opt,
        reference_ratio=cell.ratio_label,
        reference_jump_count=cell.jump_count,
        reference_rho=cell.rho,
        passed=False,
    )
    if computed is None:
        return row.model_copy(update={"detail": "not computed"})
    if computed.energy_scaled is None:
        return row.model_copy(update={"detail": computed.status})

    deviation = abs(computed.energy_scaled - cell.energy_scaled) / cell.energy_scaled
    computed_a_opt = computed.a_opt if isinstance(computed, MaterialCell) else None
    problems = []
    if deviation > table.tolerance:
        problems.append(f"energy off by {deviation:.2%}")
    if cell.ratio_label is not None and computed.ratio_label != cell.ratio_label:
        problems.append(f"ratio {computed.ratio_label} != {cell.ratio_label}")
    if cell.a_opt is not None and not _same(computed_a_opt, cell.a_opt):
        problems.append(f"a_opt {computed_a_opt} != {cell.a_opt}")
    if cell.jump_count is not None and computed.jump_count != cell.jump_count:
        problems.append(f"N* {computed.jump_count} != {cell.jump_count}")
    if cell.rho is not None and not _same(computed.rho, cell.rho, RHO_TOLERANCE):
        problems.append(f"rho {computed.rho} != {cell.rho}")

    return row.model_copy(
        update={
            "computed_energy_scaled": computed.energy_scaled,
            "relative_deviation": deviation,
            "computed_a_opt": computed_a_opt,
            "computed_ratio": computed.ratio_label,
            "computed_jump_count": computed.jump_count,
            "computed_rho": computed.rho,
            "passed": not problems,
            "detail": "; ".join(problems),
        }
    )


def compare_table(table: ReferenceTable, computed: Sequence[Computed]) -> list[ComparisonRow]:
    """
    Compare every reference cell of a table, in table order.

    Args:
        table: Reference table.
        computed: MaterialCell optima for optimum tables, SweepRow cells
            for per-pier tables.

    Returns:
        One ComparisonRow per reference cell.
    """
    per_pier = table.scope != SCOPE_OPTIMUM
    rows = [compare_cell(table, cell, _find(cell, computed, per_pier)) for cell in table.cells]
    failed = [r for r in rows if not r.passed]
    for r in failed:
        logger.warning(
            f"{table.table_id} cell alpha={r.alpha:.4g} beta={r.beta:.4g} a={r.a}: {r.detail}"
        )
    logger.info(f"{table.table_id}: {len(rows) - len(failed)}/{len(rows)} cells within tolerance")
    return rows
