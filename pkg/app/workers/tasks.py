"""
Celery tasks for sweep cells.
"""

import logging

from pydantic import ValidationError

from app.config.settings import get_settings
from app.core.optimizer import evaluate_cell
from app.schemas.records import SweepCell
from app.utils.error_handlers import ParameterError
from app.workers.celery_app import celery_app

logger = logging.getLogger(__name__)
settings = get_settings()


@celery_app.task(
    bind=True,
    name="beam_stability.workers.tasks.evaluate_cell",
    autoretry_for=(Exception,),
    retry_kwargs={"max_retries": settings.celery.task_max_retries},
    retry_backoff=True,
    retry_backoff_max=300,
    task_acks_late=True,
    # Malformed cells
    dont_autoretry_for=(ParameterError, ValidationError, KeyError),
)
def evaluate_cell_task(self, cell_data: dict) -> dict:
    """
    Evaluate one sweep cell.

    Args:
        cell_data: SweepCell as a JSON-compatible dict.

    Returns:
        The resulting SweepRow as a JSON-compatible dict. Numerical failures
        are reported in its status field rather than raised.
    """
    cell = SweepCell.model_validate(cell_data)
    logger.info(f"Task {self.request.id}: evaluating cell {cell.key}")
    row = evaluate_cell(cell)
    return row.model_dump(mode="json")
