import logging

from celery import Celery
from celery.signals import worker_process_init
from kombu import Queue

from app.config.settings import Settings, get_settings
from app.utils.constants import CELERY_DEFAULT_QUEUE, PIER_GRID

logger = logging.getLogger(__name__)


def create_celery_app(settings: Settings | None = None) -> Celery:
    """
    Create and configure the Celery application for distributed sweeps.

    Features:
    - Late acknowledgment so a crashed worker's cell is redelivered
    - One queue, 'default', for sweep cells. A cell that exhausts its
      retries fails the whole group, which run_celery raises as NumericalError.

    To run a worker:
        celery -A app.workers.celery_app worker --queues=default

    To monitor queues:
        celery -A app.workers.celery_app inspect active_queues
    """
    settings = settings or get_settings()
    celery_app = Celery(
        "beam-stability-sweeps",
        broker=settings.celery.broker_url,
        backend=settings.celery.result_backend,
    )

    celery_app.conf.update(
        task_serializer=settings.celery.task_serializer,
        result_serializer=settings.celery.result_serializer,
        accept_content=settings.celery.accept_content,
        worker_concurrency=settings.celery.worker_concurrency,
        task_always_eager=settings.celery.task_always_eager,
        task_eager_propagates=True,
        # Acknowledge a cell only after it has been evaluated.
        task_acks_late=True,
        # Cells are long-running
        worker_prefetch_multiplier=1,
        task_queues=(
            Queue(CELERY_DEFAULT_QUEUE, routing_key="task.#"),
        ),
        task_default_queue=CELERY_DEFAULT_QUEUE,
        task_default_exchange="tasks",
        task_default_routing_key="task.default",
    )

    celery_app.autodiscover_tasks(["app.workers"])
    return celery_app


celery_app = create_celery_app()


@worker_process_init.connect
def warm_basis_cache(**kwargs):
    """Build the homogeneous bases of the pier grid once per worker process."""
    from app.core.density import PierLayout
    from app.core.galerkin import build_homogeneous_basis

    logger.info("Building homogeneous bases for the pier grid...")
    for a in PIER_GRID:
        try:
            build_homogeneous_basis(PierLayout(a))
        except Exception as e:
            logger.warning(f"Could not prebuild basis for a={a}: {e}")
    logger.info("Homogeneous bases ready")
