from .error_handlers import (
    BeamStabilityError,
    ConfigurationError,
    ConsistencyError,
    DensityError,
    IntegrationError,
    NumericalError,
    ParameterError,
    PlateauError,
    RootFindingError,
    SimplicityError,
    SpectrumError,
    handle_cli_exception,
)

__all__ = [
    "BeamStabilityError",
    "ConfigurationError",
    "ConsistencyError",
    "DensityError",
    "IntegrationError",
    "NumericalError",
    "ParameterError",
    "PlateauError",
    "RootFindingError",
    "SimplicityError",
    "SpectrumError",
    "handle_cli_exception",
]
