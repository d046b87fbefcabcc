"""`threshold`: critical energies of all consecutive pairs, or a pier sweep."""

import logging

from app.cli.common import make_writer, resolve_density, use_exact_solver
from app.config.settings import Settings
from app.core.density import PierLayout
from app.core.optimizer import spectrum_threshold, sweep_pier
from app.schemas.run import RunConfig
from app.utils.constants import ENERGY_SCALE, EXIT_NUMERICAL_FAILURE, EXIT_OK
from app.workers.executor import make_runner

logger = logging.getLogger(__name__)


def run_single(config: RunConfig, settings: Settings) -> int:
    layout = PierLayout(config.a)
    resolved = resolve_density(config, layout, settings)
    report = spectrum_threshold(
        resolved.density, layout, exact=use_exact_solver(config), count=settings.spectrum.mode_count
    )
    make_writer(config, settings).write_records("threshold.csv", report.pairs)
    logger.info(
        f"Threshold at a={config.a}: E={report.threshold:.12g} (E/10^2={report.threshold / ENERGY_SCALE:.4g}), "
        f"minimizing ratio {report.ratio_label}"
    )
    return EXIT_OK


def run_sweep(config: RunConfig, settings: Settings) -> int:
    sweep = sweep_pier(config.alpha, config.beta, config.a_grid, config.density, make_runner(settings))
    make_writer(config, settings).write_records("threshold_sweep.csv", sweep.rows)
    if sweep.best is None:
        logger.error("Every pier position failed")
        return EXIT_NUMERICAL_FAILURE
    logger.info(
        f"a_opt={sweep.a_opt}: E*={sweep.best.energy:.12g}, ratio {sweep.best.ratio_label}"
    )
    failed = [row for row in sweep.rows if row.status != "ok"]
    return EXIT_NUMERICAL_FAILURE if failed else EXIT_OK


def run(config: RunConfig, settings: Settings) -> int:
    """Write threshold.csv for one pier position, threshold_sweep.csv for a pier grid."""
    if config.a_grid:
        return run_sweep(config, settings)
    return run_single(config, settings)
