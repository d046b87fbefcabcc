import logging

from pydantic import ValidationError

from app.utils.constants import EXIT_CONFIG_ERROR, EXIT_NUMERICAL_FAILURE

logger = logging.getLogger(__name__)


class BeamStabilityError(Exception):
    """Base exception for the toolkit."""


class ParameterError(BeamStabilityError, ValueError):
    """A precondition on a numerical parameter was violated."""


class ConfigurationError(BeamStabilityError):
    """Invalid configuration file, key or output location."""


class DensityError(ParameterError):
    """Density violates mass, bounds, monotonicity or bang-bang structure."""


class NumericalError(BeamStabilityError):
    """Base class for failures inside numerical routines."""


class RootFindingError(NumericalError):
    """Fewer roots than requested were bracketed below the scan ceiling."""


class SimplicityError(NumericalError):
    """Two roots collapsed together or a null space is not one-dimensional."""


class SpectrumError(NumericalError):
    """Gram matrix or generalized eigensolver failure."""


class IntegrationError(NumericalError):
    """ODE integration failed or exceeded its drift budget."""


class PlateauError(NumericalError):
    """The critical level set of g has positive measure."""


class ConsistencyError(NumericalError):
    """Two equivalent closed forms disagree beyond rounding."""


def handle_cli_exception(exc: BaseException) -> int:
    """
    Log an exception raised by a subcommand and map it to an exit code.

    Args:
        exc: The exception raised while running a command.

    Returns:
        2 for configuration/parameter problems, 1 for everything else.
    """
    if isinstance(exc, ParameterError | ConfigurationError):
        logger.error(f"Configuration error: {exc}")
        return EXIT_CONFIG_ERROR
    if isinstance(exc, ValidationError):
        logger.error(f"Invalid configuration: {exc}")
        return EXIT_CONFIG_ERROR
    if isinstance(exc, NumericalError):
        logger.error(f"Numerical failure: {exc}", exc_info=True)
        return EXIT_NUMERICAL_FAILURE
    logger.error(f"Unexpected error: {exc}", exc_info=True)
    return EXIT_NUMERICAL_FAILURE
