"""
Unit tests for the reference tables and their comparison with computed cells.
"""

import pandas as pd
import pytest

from app.schemas.records import MaterialCell, ReferenceTable, SweepRow
from app.services.reference import (
    compare_cell,
    compare_table,
    default_reference_set,
    get_reference_table,
    load_reference_set,
)
from app.services.reporting import ReportWriter
from app.services.reproduction import per_pier_cells, reproduce_table
from app.utils.error_handlers import ConfigurationError


@pytest.fixture
def reference():
    return default_reference_set()


@pytest.fixture
def t1(reference):
    return reference.get("T1")


def test_packaged_tables_load(reference):
    """All published tables are present and parse fractions."""
    assert [t.table_id for t in reference.tables] == ["H", "T1", "T2", "T3", "T4", "T5"]
    t1 = reference.get("T1")
    assert t1.scope == "optimum"
    assert t1.alphas == pytest.approx([5 / 6, 2 / 3, 1 / 2, 1 / 3])
    assert t1.betas == pytest.approx([3 / 2, 2.0, 5 / 2, 3.0])
    assert len(t1.cells) == 16


def test_baseline_table(reference):
    [cell] = reference.get("H").cells
    assert (cell.alpha, cell.beta, cell.a) == (1.0, 1.0, 0.5)
    assert cell.energy_scaled == 2.17


def test_unknown_table(reference):
    with pytest.raises(ConfigurationError, match="Unknown table"):
        get_reference_table("T9", reference)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigurationError, match="not found"):
        load_reference_set(tmp_path / "missing.yaml")


def test_invalid_file(tmp_path):
    path = tmp_path / "tables.yaml"
    path.write_text("version: '1'\ntables:\n  - table_id: X\n")
    with pytest.raises(ConfigurationError, match="Invalid"):
        load_reference_set(path)


def material_cell(cell, **updates):
    values = {
        "alpha": cell.alpha,
        "beta": cell.beta,
        "mode": "two-step-heavy",
        "a_opt": cell.a_opt,
        "energy_scaled": cell.energy_scaled,
        "energy": cell.energy_scaled * 100,
        "ratio_label": cell.ratio_label,
        "rho": cell.rho,
        "jump_count": 1,
    }
    values.update(updates)
    return MaterialCell(**values)


def test_compare_cell_passes_within_tolerance(t1):
    cell = t1.cells[0]
    row = compare_cell(t1, cell, material_cell(cell, energy_scaled=cell.energy_scaled * 1.015, rho=cell.rho + 0.004))
    assert row.passed
    assert row.relative_deviation == pytest.approx(0.015)
    assert row.detail == ""


@pytest.mark.parametrize(
    "updates,fragment",
    [
        ({"energy_scaled": 3.0}, "energy off"),
        ({"ratio_label": "4/3"}, "ratio"),
        ({"a_opt": 0.65}, "a_opt"),
        ({"rho": 0.3}, "rho"),
    ],
)
def test_compare_cell_failures(t1, updates, fragment):
    cell = t1.cells[0]
    row = compare_cell(t1, cell, material_cell(cell, **updates))
    assert not row.passed
    assert fragment in row.detail


def test_compare_cell_not_computed(t1):
    row = compare_cell(t1, t1.cells[0], None)
    assert not row.passed
    assert row.detail == "not computed"


def test_compare_cell_failed_computation(t1):
    cell = t1.cells[0]
    failed = MaterialCell(alpha=cell.alpha, beta=cell.beta, mode="two-step-heavy", status="13 failed cells")
    assert compare_cell(t1, cell, failed).detail == "13 failed cells"


def test_compare_table_matches_per_pier_cells(reference):
    table = reference.get("H")
    computed = [
        SweepRow(alpha=1.0, beta=1.0, a=0.45, mode="homogeneous", energy=100.0, energy_scaled=1.0, ratio_label="2/1"),
        SweepRow(alpha=1.0, beta=1.0, a=0.5, mode="homogeneous", energy=217.5, energy_scaled=2.175, ratio_label="2/1"),
    ]
    [row] = compare_table(table, computed)
    assert row.passed
    assert row.computed_energy_scaled == 2.175


def reference_runner(table: ReferenceTable):
    """Runner answering every cell with the published value of its table."""

    def run(cells):
        rows = []
        for sweep_cell in cells:
            match = next(
                c for c in table.cells
                if c.alpha == sweep_cell.alpha and c.beta == sweep_cell.beta
            )
            at_optimum = match.a_opt is None or sweep_cell.a == match.a_opt
            energy = match.energy_scaled if at_optimum else match.energy_scaled * 0.9
            rows.append(
                SweepRow(
                    alpha=sweep_cell.alpha,
                    beta=sweep_cell.beta,
                    a=sweep_cell.a,
                    mode=sweep_cell.mode,
                    energy=energy * 100,
                    energy_scaled=energy,
                    ratio_label=match.ratio_label,
                    jump_count=match.jump_count if match.jump_count is not None else 1,
                    rho=match.rho,
                )
            )
        return rows

    return run


def test_reproduce_table_with_reference_runner(reference, output_dir):
    """A runner returning the published values reproduces T1 and writes three files."""
    table = reference.get("T1")
    result = reproduce_table("T1", ReportWriter(output_dir), reference_runner(table), reference)

    assert result.passed
    assert [p.name for p in result.files] == ["T1_table.csv", "T1_comparison.csv", "T1_energy_curve.csv"]
    comparison = pd.read_csv(output_dir / "T1_comparison.csv")
    assert len(comparison) == 16
    assert comparison["passed"].all()
    curve = pd.read_csv(output_dir / "T1_energy_curve.csv")
    assert len(curve) == 16 * 13


def test_reproduce_table_tolerance_override(reference, output_dir):
    table = reference.get("T1")

    def shifted(cells):
        rows = reference_runner(table)(cells)
        return [r.model_copy(update={"energy_scaled": r.energy_scaled * 1.01}) for r in rows]

    strict = reproduce_table("T1", ReportWriter(output_dir), shifted, reference, tolerance=0.005)
    assert len(strict.failures) == 16


def test_per_pier_cells(reference):
    table = reference.get("T3")
    cells = per_pier_cells(table)
    assert len(cells) == len(table.cells)
    assert all(cell.mode == table.mode for cell in cells)
