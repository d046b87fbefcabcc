"""
Beam stability toolkit - command-line entry point.

Usage:
    beam-stability spectrum --a 0.5
    beam-stability threshold --density two-step-heavy --alpha 1/3 --beta 2 --a-grid "0.35 0.4 0.45"
    beam-stability reproduce T1 --workers 8
    beam-stability simulate --zeta-rel 1.2 --z0-rel 1e-4
    beam-stability profile --density optimize --alpha 1/2 --beta 2 --a 0.5
"""

import logging
import sys

from app.cli import COMMANDS
from app.cli.config import apply_settings_overrides, build_run_config
from app.cli.parser import build_parser
from app.config.logging import setup_logging
from app.config.settings import get_settings
from app.utils.error_handlers import handle_cli_exception

logger = logging.getLogger(__name__)


def main(argv: list[str] | None = None) -> int:
    """Run one subcommand and return its exit code."""
    args = build_parser().parse_args(argv)
    settings = get_settings()
    setup_logging(
        args.log_level or settings.log_level,
        settings.environment,
        settings.log_format,
        settings.log_file,
    )
    try:
        config = build_run_config(args)
        settings = apply_settings_overrides(config)
        logger.info(f"Running {config.subcommand} ({settings.environment})")
        return COMMANDS[config.subcommand](config, settings)
    except Exception as e:
        return handle_cli_exception(e)


if __name__ == "__main__":
    sys.exit(main())
