import math
from fractions import Fraction

from app.utils.constants import MAX_EVOLUTION_MODES
from app.utils.error_handlers import ParameterError


def validate_material_bounds(alpha: float, beta: float, allow_homogeneous: bool = True) -> None:
    """
    Validate the density bounds of a material pair.

    Args:
        alpha: Lower density bound.
        beta: Upper density bound.
        allow_homogeneous: Accept the degenerate pair alpha = beta = 1.

    Raises:
        ParameterError: If the bounds are not 0 < alpha < 1 < beta.
    """
    if not (math.isfinite(alpha) and math.isfinite(beta)):
        raise ParameterError(f"Density bounds must be finite, got alpha={alpha}, beta={beta}")
    if allow_homogeneous and alpha == 1.0 and beta == 1.0:
        return
    if not 0.0 < alpha < 1.0 < beta:
        raise ParameterError(
            f"Density bounds must satisfy 0 < alpha < 1 < beta, got alpha={alpha}, beta={beta}"
        )


def validate_pier_parameter(a: float) -> None:
    """
    Validate the pier position parameter.

    Raises:
        ParameterError: If a is not in the open interval (0, 1).
    """
    if not (math.isfinite(a) and 0.0 < a < 1.0):
        raise ParameterError(f"Pier parameter a must satisfy 0 < a < 1, got a={a}")


def validate_mode_pair(lam: float, nu: float) -> None:
    """
    Validate an ordered eigenvalue pair.

    Raises:
        ParameterError: If the pair is not 0 < lam < nu.
    """
    if not 0.0 < lam < nu:
        raise ParameterError(f"Mode pair must satisfy 0 < lambda < nu, got ({lam}, {nu})")


def validate_positive(name: str, value: float) -> None:
    """Raise ParameterError unless value is finite and > 0."""
    if not (math.isfinite(value) and value > 0.0):
        raise ParameterError(f"{name} must be positive, got {value}")


def validate_mode_count(n: int, available: int) -> None:
    """
    Validate the number of modes requested for a time integration.

    Raises:
        ParameterError: If n is outside 1..min(12, available).
    """
    limit = min(MAX_EVOLUTION_MODES, available)
    if not 1 <= n <= limit:
        raise ParameterError(f"Mode count must be between 1 and {limit}, got {n}")


def parse_number(value):
    """Numbers, numeric strings and fractions such as '5/6'."""
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"Not a number or fraction: {value!r}") from e
    return value
