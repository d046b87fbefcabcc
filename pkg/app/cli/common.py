"""Helpers shared by the subcommands."""

import logging
from dataclasses import dataclass

from app.config.settings import Settings
from app.core.density import Density, PierLayout, homogeneous, make_two_step, two_step_rho
from app.core.optimizer import OptimizationResult, optimize_density
from app.schemas.run import RunConfig
from app.services.reporting import ReportWriter
from app.utils.constants import (
    CENTER_HEAVY,
    CENTER_LIGHT,
    MODE_HOMOGENEOUS,
    MODE_OPTIMIZE,
    MODE_TWO_STEP_HEAVY,
)

logger = logging.getLogger(__name__)


@dataclass
class ResolvedDensity:
    density: Density
    rho: float | None = None
    optimization: OptimizationResult | None = None


def resolve_density(config: RunConfig, layout: PierLayout, settings: Settings) -> ResolvedDensity:
    """Density selected by the config's mode; optimize runs the rebalancing iteration."""
    if config.density == MODE_HOMOGENEOUS:
        return ResolvedDensity(homogeneous())
    if config.density == MODE_OPTIMIZE:
        result = optimize_density(layout, config.alpha, config.beta, settings.optimizer)
        logger.info(
            f"Optimized density at a={layout.a}: breakpoints {list(result.density.breakpoints)}, "
            f"values {list(result.density.values)}"
        )
        return ResolvedDensity(result.density, optimization=result)
    center = CENTER_HEAVY if config.density == MODE_TWO_STEP_HEAVY else CENTER_LIGHT
    return ResolvedDensity(
        make_two_step(config.alpha, config.beta, center),
        rho=two_step_rho(config.alpha, config.beta, center),
    )


def use_exact_solver(config: RunConfig) -> bool:
    """
    Closed-form roots unless Galerkin is requested, a basis size is given,
    or the density comes from the optimizer.
    """
    if config.solver == "auto":
        return config.density != MODE_OPTIMIZE and config.n is None
    if config.solver == "exact" and config.n is not None:
        logger.warning(f"Basis size n={config.n} ignored by the closed-form solver")
    return config.solver == "exact"


def pier_values(config: RunConfig) -> list[float]:
    return sorted(set(config.a_grid)) if config.a_grid else [config.a]


def make_writer(config: RunConfig, settings: Settings) -> ReportWriter:
    return ReportWriter(config.output, settings.output)
