"""
Sweep execution backends: in-process, process pool, or Celery.
"""

import logging
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor

from app.config.settings import Settings, get_settings
from app.core.optimizer import Runner, evaluate_cell, run_sequential
from app.schemas.records import SweepCell, SweepRow
from app.utils.constants import SWEEP_BACKEND_CELERY
from app.utils.error_handlers import NumericalError

logger = logging.getLogger(__name__)


def _row_key(row: SweepRow) -> tuple[float, float, float, str]:
    return (row.alpha, row.beta, row.a, row.mode)


def run_pool(cells: Sequence[SweepCell], workers: int) -> list[SweepRow]:
    """Evaluate cells on a local process pool."""
    if workers <= 1 or len(cells) <= 1:
        return run_sequential(list(cells))
    chunk = max(1, len(cells) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(evaluate_cell, cells, chunksize=chunk))


def run_celery(cells: Sequence[SweepCell], settings: Settings) -> list[SweepRow]:
    """
    Dispatch one Celery task per cell and wait for all of them.

    Raises:
        NumericalError: A task failed after its retries or timed out.
    """
    from celery import group

    from app.workers.tasks import evaluate_cell_task

    job = group(evaluate_cell_task.s(cell.model_dump(mode="json")) for cell in cells)
    try:
        results = job.apply_async().get(timeout=settings.celery.result_timeout)
    except Exception as e:
        raise NumericalError(f"Distributed sweep failed: {e}") from e
    return [SweepRow.model_validate(result) for result in results]


def run_cells(cells: Sequence[SweepCell], settings: Settings | None = None) -> list[SweepRow]:
    """
    Evaluate sweep cells on the configured backend.

    Returns:
        Rows sorted by cell key, independent of completion order.
    """
    settings = settings or get_settings()
    cells = list(cells)
    backend = settings.sweep.backend
    logger.info(f"Running {len(cells)} sweep cells (backend={backend}, workers={settings.sweep.workers})")
    if backend == SWEEP_BACKEND_CELERY:
        rows = run_celery(cells, settings)
    else:
        rows = run_pool(cells, settings.sweep.workers)
    failed = sum(1 for row in rows if row.status != "ok")
    if failed:
        logger.warning(f"{failed} of {len(rows)} sweep cells failed")
    return sorted(rows, key=_row_key)


def make_runner(settings: Settings | None = None) -> Runner:
    """Runner for sweep_pier/sweep_materials bound to the given settings."""
    return lambda cells: run_cells(cells, settings)
