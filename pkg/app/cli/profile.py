"""`profile`: samples of g(p, x) on the half-beam."""

import logging

from app.cli.common import make_writer, resolve_density
from app.config.settings import Settings
from app.core.density import PierLayout
from app.core.galerkin import solve_weighted_spectrum
from app.core.optimizer import g_profile, profile_structure_problems
from app.core.stability import threshold
from app.schemas.run import RunConfig
from app.utils.constants import EXIT_OK

logger = logging.getLogger(__name__)


def run(config: RunConfig, settings: Settings) -> int:
    """Write profile.csv (x, g) for the chosen pair, default the minimizing one."""
    layout = PierLayout(config.a)
    density = resolve_density(config, layout, settings).density
    spectrum = solve_weighted_spectrum(density, layout, count=settings.spectrum.mode_count)
    pair = config.pair or threshold(spectrum.eigenvalues, spectrum.parities).argmin
    profile = g_profile(spectrum, pair, config.samples)
    for problem in profile_structure_problems(profile):
        logger.warning(f"g profile: {problem}")
    make_writer(config, settings).write_profile("profile.csv", profile)
    return EXIT_OK
