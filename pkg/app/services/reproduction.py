"""
Regeneration of the published threshold tables.

Optimum tables run a pier sweep for every material pair of the table and
keep the best pier position; per-pier tables evaluate exactly the cells
they list.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path

from app.core.optimizer import Runner, sweep_materials
from app.schemas.records import ComparisonRow, MaterialCell, ReferenceSet, ReferenceTable, SweepCell, SweepRow
from app.services.reference import compare_table, get_reference_table
from app.services.reporting import ReportWriter
from app.utils.constants import PIER_GRID, SCOPE_OPTIMUM
from app.workers.executor import make_runner

logger = logging.getLogger(__name__)

ENERGY_CURVE_COLUMNS = (
    "alpha",
    "beta",
    "a",
    "mode",
    "energy",
    "energy_scaled",
    "ratio_label",
    "jump_count",
    "rho",
    "status",
)


@dataclass
class ReproductionResult:
    table: ReferenceTable
    rows: list[SweepRow]
    computed: list[MaterialCell] | list[SweepRow]
    comparison: list[ComparisonRow]
    files: list[Path] = field(default_factory=list)

    @property
    def failures(self) -> list[ComparisonRow]:
        return [row for row in self.comparison if not row.passed]

    @property
    def passed(self) -> bool:
        return not self.failures


def per_pier_cells(table: ReferenceTable) -> list[SweepCell]:
    return [
        SweepCell(alpha=cell.alpha, beta=cell.beta, a=cell.a, mode=table.mode)
        for cell in table.cells
        if cell.a is not None
    ]


def compute_table(
    table: ReferenceTable, runner: Runner | None = None
) -> tuple[list[SweepRow], list[MaterialCell] | list[SweepRow]]:
    """
    Evaluate every cell a table needs.

    Returns:
        All evaluated sweep rows, and the computed counterparts of the
        table cells (per-pair optima or the rows themselves).
    """
    runner = runner or make_runner()
    if table.scope == SCOPE_OPTIMUM:
        sweep = sweep_materials(table.alphas, table.betas, PIER_GRID, table.mode, runner)
        return sweep.rows, sweep.cells
    rows = sorted(runner(per_pier_cells(table)), key=lambda r: (r.alpha, r.beta, r.a))
    return rows, rows


def reproduce_table(
    table_id: str,
    writer: ReportWriter,
    runner: Runner | None = None,
    reference: ReferenceSet | None = None,
    tolerance: float | None = None,
) -> ReproductionResult:
    """
    Regenerate one table and compare it with the published values.

    Writes <id>_table.csv (computed cells), <id>_comparison.csv (deviation
    per cell) and <id>_energy_curve.csv (threshold against a for every
    evaluated cell).

    Args:
        table_id: Table identifier, e.g. "T1".
        writer: Destination of the CSV files.
        runner: Sweep backend, defaults to the configured executor.
        reference: Reference set, defaults to the packaged tables.
        tolerance: Relative threshold tolerance replacing the table's own.

    Returns:
        The ReproductionResult; cell failures never raise.
    """
    table = get_reference_table(table_id, reference)
    if tolerance is not None:
        table = table.model_copy(update={"tolerance": tolerance})
    logger.info(f"Reproducing {table.table_id} ({table.provenance})")
    rows, computed = compute_table(table, runner)
    comparison = compare_table(table, computed)

    result = ReproductionResult(table=table, rows=rows, computed=computed, comparison=comparison)
    result.files = [
        writer.write_records(f"{table.table_id}_table.csv", computed),
        writer.write_records(f"{table.table_id}_comparison.csv", comparison),
        writer.write_records(f"{table.table_id}_energy_curve.csv", rows, ENERGY_CURVE_COLUMNS),
    ]
    if result.passed:
        logger.info(f"{table.table_id} reproduced within tolerance")
    else:
        logger.warning(f"{table.table_id}: {len(result.failures)} cells outside tolerance")
    return result
