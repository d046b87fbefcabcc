"""
Unit tests for sweep execution backends and the Celery task.
"""

import pytest
from pydantic import ValidationError

from app.config.settings import get_test_settings
from app.schemas.records import SweepCell, SweepRow
from app.utils.constants import CELERY_DEFAULT_QUEUE
from app.utils.error_handlers import NumericalError, ParameterError
from app.workers.celery_app import create_celery_app
from app.workers.executor import make_runner, run_celery, run_cells, run_pool
from app.workers.tasks import evaluate_cell_task


def fake_row(cell: SweepCell) -> SweepRow:
    return SweepRow(alpha=cell.alpha, beta=cell.beta, a=cell.a, mode=cell.mode, energy=cell.a, energy_scaled=cell.a / 100)


@pytest.fixture
def cells():
    return [
        SweepCell(alpha=0.5, beta=2.0, a=a, mode=mode)
        for mode in ("two-step-light", "two-step-heavy")
        for a in (0.6, 0.4, 0.5)
    ]


def test_run_cells_sorts_rows(mocker, cells):
    """Rows come back ordered by (alpha, beta, a, mode) whatever the completion order."""
    mocker.patch(
        "app.workers.executor.run_sequential",
        side_effect=lambda batch: [fake_row(c) for c in reversed(batch)],
    )
    rows = run_cells(cells, get_test_settings(SWEEP_WORKERS="1", SWEEP_BACKEND="local"))

    assert [(r.a, r.mode) for r in rows] == sorted((c.a, c.mode) for c in cells)


def test_run_pool_single_worker_is_sequential(mocker, cells):
    sequential = mocker.patch("app.workers.executor.run_sequential", return_value=[])
    run_pool(cells, 1)
    sequential.assert_called_once()


def test_run_cells_dispatches_to_celery(mocker, cells):
    celery = mocker.patch("app.workers.executor.run_celery", return_value=[fake_row(c) for c in cells])
    settings = get_test_settings(SWEEP_BACKEND="celery")

    rows = run_cells(cells, settings)

    celery.assert_called_once()
    assert len(rows) == len(cells)


def test_make_runner(mocker, cells):
    mocker.patch("app.workers.executor.run_sequential", side_effect=lambda batch: [fake_row(c) for c in batch])
    runner = make_runner(get_test_settings(SWEEP_WORKERS="1", SWEEP_BACKEND="local"))
    assert len(runner(cells)) == len(cells)


def test_evaluate_cell_task(mocker):
    """The task validates the cell and returns the row as JSON-compatible data."""
    cell = SweepCell(alpha=0.5, beta=2.0, a=0.5, mode="two-step-heavy")
    evaluate = mocker.patch("app.workers.tasks.evaluate_cell", side_effect=fake_row)

    result = evaluate_cell_task.apply(args=[cell.model_dump(mode="json")]).get()

    evaluate.assert_called_once_with(cell)
    assert SweepRow.model_validate(result) == fake_row(cell)


def test_evaluate_cell_task_rejects_malformed_cell(mocker):
    evaluate = mocker.patch("app.workers.tasks.evaluate_cell")
    with pytest.raises(ValidationError):
        evaluate_cell_task.apply(args=[{"alpha": "x"}]).get()
    evaluate.assert_not_called()


def test_run_celery_eager(mocker, cells):
    """With an eager app every cell runs in-process through the task."""
    mocker.patch("app.workers.tasks.evaluate_cell", side_effect=fake_row)
    rows = run_celery(cells, get_test_settings())
    assert sorted(r.a for r in rows) == sorted(c.a for c in cells)


def test_celery_app_routes_cells_to_one_queue():
    """Sweep cells share the default queue; no other queue is declared."""
    app = create_celery_app(get_test_settings())
    assert [queue.name for queue in app.conf.task_queues] == [CELERY_DEFAULT_QUEUE]
    assert app.conf.task_default_queue == CELERY_DEFAULT_QUEUE


def test_run_celery_raises_on_failed_cell(mocker, cells):
    """A cell that fails without retry surfaces as a numerical failure of the sweep."""
    mocker.patch("app.workers.tasks.evaluate_cell", side_effect=ParameterError("a outside (0, 1)"))
    with pytest.raises(NumericalError, match="Distributed sweep failed"):
        run_celery(cells, get_test_settings())
