"""`reproduce`: regenerate published tables and diff them against the reference values."""

import logging

from app.cli.common import make_writer
from app.config.settings import Settings
from app.schemas.run import RunConfig
from app.services.reference import default_reference_set
from app.services.reproduction import reproduce_table
from app.utils.constants import BASELINE_TABLE_ID, EXIT_NUMERICAL_FAILURE, EXIT_OK, TABLE_IDS
from app.workers.executor import make_runner

logger = logging.getLogger(__name__)


def run(config: RunConfig, settings: Settings) -> int:
    """Exit 1 when any cell of any requested table falls outside its tolerance."""
    table_ids = [BASELINE_TABLE_ID, *TABLE_IDS] if config.table == "all" else [config.table]
    writer = make_writer(config, settings)
    runner = make_runner(settings)
    reference = default_reference_set()

    failed = 0
    for table_id in table_ids:
        result = reproduce_table(table_id, writer, runner, reference, config.tolerance)
        failed += len(result.failures)
    if failed:
        logger.error(f"{failed} reference cells outside tolerance")
        return EXIT_NUMERICAL_FAILURE
    return EXIT_OK
