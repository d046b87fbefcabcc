# File: app/core/density.py

"""
Admissible beam densities.

A density is even, piecewise constant and stored on the right half-beam
[0, pi] only. Pieces are right-open: evaluating exactly at a breakpoint
returns the value of the piece to its left.
"""

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import InitVar, dataclass

import numpy as np

from app.schemas.records import DensityRecord
from app.utils.constants import (
    BREAKPOINT_MERGE_TOLERANCE,
    CENTER_HEAVY,
    CENTER_LIGHT,
    HALF_SPAN,
    INDICATOR_LENGTH_TOLERANCE,
    MASS_TOLERANCE,
    TOTAL_MASS,
)
from app.utils.error_handlers import DensityError, ParameterError
from app.utils.validators import validate_material_bounds, validate_pier_parameter

logger = logging.getLogger(__name__)

# Mass residuals below this are left alone by from_indicator
_SNAP_THRESHOLD = 1e-14


@dataclass(frozen=True)
class PierLayout:
    """Intermediate piers at +-a*pi, hinged ends at +-pi."""

    a: float

    def __post_init__(self):
        validate_pier_parameter(self.a)

    @property
    def pier(self) -> float:
        """Abscissa of the right pier."""
        return self.a * math.pi


@dataclass(frozen=True)
class Density:
    """
    Symmetric piecewise-constant density on (-pi, pi).

    Attributes:
        alpha: Lower bound of admissible values.
        beta: Upper bound of admissible values.
        breakpoints: Strictly increasing jump abscissae in (0, pi).
        values: Piece values on [0, b1), [b1, b2), ..., [bk, pi].
        validation_mode: Accept any value in [alpha, beta] instead of
            requiring a bang-bang or constant density.
    """

    alpha: float
    beta: float
    breakpoints: tuple[float, ...]
    values: tuple[float, ...]
    validation_mode: bool = False
    strict: InitVar[bool] = True

    def __post_init__(self, strict: bool):
        object.__setattr__(self, "breakpoints", tuple(float(b) for b in self.breakpoints))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if strict:
            self.validate()

    def validate(self) -> None:
        """
        Check every admissibility condition.

        Raises:
            DensityError: On the first violated condition.
        """
        try:
            validate_material_bounds(self.alpha, self.beta)
        except ParameterError as e:
            raise DensityError(str(e)) from None

        if len(self.values) != len(self.breakpoints) + 1:
            raise DensityError(
                f"Expected {len(self.breakpoints) + 1} values for "
                f"{len(self.breakpoints)} breakpoints, got {len(self.values)}"
            )
        nodes = self.nodes
        if any(right <= left for left, right in zip(nodes, nodes[1:])):
            raise DensityError(f"Breakpoints must be strictly increasing in (0, pi): {self.breakpoints}")
        for value in self.values:
            if not self.alpha <= value <= self.beta:
                raise DensityError(f"Value {value} outside [{self.alpha}, {self.beta}]")
        if any(left == right for left, right in zip(self.values, self.values[1:])):
            raise DensityError(f"Adjacent pieces share a value: {self.values}")
        if not self.validation_mode and not self.is_constant and not self.is_bang_bang:
            raise DensityError(f"Values must be alpha or beta outside validation mode: {self.values}")

        total = self.mass()
        if abs(total - TOTAL_MASS) > MASS_TOLERANCE:
            raise DensityError(f"Mass {total!r} differs from 2*pi by {total - TOTAL_MASS:.3e}")

    @property
    def nodes(self) -> tuple[float, ...]:
        """Piece boundaries on [0, pi], endpoints included."""
        return (0.0, *self.breakpoints, HALF_SPAN)

    @property
    def is_constant(self) -> bool:
        return len(self.values) == 1

    @property
    def is_bang_bang(self) -> bool:
        return all(v in (self.alpha, self.beta) for v in self.values)

    @property
    def is_homogeneous(self) -> bool:
        return self.is_constant and self.values[0] == 1.0

    @property
    def jump_count(self) -> int:
        """Number of jumps on the open half-beam (0, pi)."""
        return len(self.breakpoints)

    def segments(self) -> list[tuple[float, float, float]]:
        """Return (start, end, value) for each piece of the half-beam."""
        nodes = self.nodes
        return [(nodes[i], nodes[i + 1], self.values[i]) for i in range(len(self.values))]

    def mass(self) -> float:
        """Exact integral of p over (-pi, pi)."""
        return 2.0 * math.fsum(v * (end - start) for start, end, v in self.segments())

    def evaluate(self, x: float | np.ndarray) -> float | np.ndarray:
        """Evaluate p at abscissae |x| <= pi."""
        x_abs = np.abs(np.asarray(x, dtype=float))
        idx = np.searchsorted(np.asarray(self.breakpoints, dtype=float), x_abs, side="left")
        out = np.asarray(self.values, dtype=float)[idx]
        return float(out) if out.ndim == 0 else out

    def heavy_set(self) -> list[tuple[float, float]]:
        """Half-beam intervals where p equals beta."""
        return [(start, end) for start, end, v in self.segments() if v == self.beta]

    def to_record(self) -> DensityRecord:
        return DensityRecord(
            alpha=self.alpha,
            beta=self.beta,
            breakpoints=list(self.breakpoints),
            values=list(self.values),
        )

    @classmethod
    def from_record(cls, record: DensityRecord) -> "Density":
        return cls(
            alpha=record.alpha,
            beta=record.beta,
            breakpoints=tuple(record.breakpoints),
            values=tuple(record.values),
        )


def evaluate(p: Density, x: float | np.ndarray) -> float | np.ndarray:
    """Module-level alias of Density.evaluate."""
    return p.evaluate(x)


def mass(p: Density) -> float:
    """Module-level alias of Density.mass."""
    return p.mass()


def heavy_fraction(alpha: float, beta: float) -> float:
    """Fraction of the half-beam that must carry beta for unit mean density."""
    return (1.0 - alpha) / (beta - alpha)


def two_step_rho(alpha: float, beta: float, center: str) -> float:
    """
    Jump parameter of the two-step density with the given center material.

    Args:
        alpha: Light density.
        beta: Heavy density.
        center: "heavy" for p(0) = beta, "light" for p(0) = alpha.

    Returns:
        rho such that the single jump sits at rho * pi.
    """
    if center == CENTER_HEAVY:
        return heavy_fraction(alpha, beta)
    if center == CENTER_LIGHT:
        return (beta - 1.0) / (beta - alpha)
    raise ParameterError(f"Center must be '{CENTER_HEAVY}' or '{CENTER_LIGHT}', got {center!r}")


def homogeneous() -> Density:
    """The unit density on a homogeneous beam (alpha = beta = 1)."""
    return Density(alpha=1.0, beta=1.0, breakpoints=(), values=(1.0,))


def constant_density(alpha: float, beta: float) -> Density:
    """p = 1 seen as a member of the (alpha, beta) class."""
    return Density(alpha=alpha, beta=beta, breakpoints=(), values=(1.0,))


def make_two_step(alpha: float, beta: float, center: str) -> Density:
    """
    Build the two-step density with one jump per half-beam.

    Args:
        alpha: Light density, 0 < alpha < 1.
        beta: Heavy density, beta > 1.
        center: "heavy" puts beta around x = 0, "light" puts alpha there.

    Returns:
        The two-step Density; its mass is 2*pi by construction.
    """
    try:
        validate_material_bounds(alpha, beta, allow_homogeneous=False)
    except ParameterError as e:
        raise DensityError(str(e)) from None
    rho = two_step_rho(alpha, beta, center)
    values = (beta, alpha) if center == CENTER_HEAVY else (alpha, beta)
    return Density(alpha=alpha, beta=beta, breakpoints=(rho * math.pi,), values=values)


def _normalize_intervals(intervals: Iterable[Sequence[float]]) -> list[list[float]]:
    tol = BREAKPOINT_MERGE_TOLERANCE
    cleaned = []
    for lo, hi in intervals:
        lo = min(max(float(lo), 0.0), HALF_SPAN)
        hi = min(max(float(hi), 0.0), HALF_SPAN)
        if lo <= tol:
            lo = 0.0
        if hi >= HALF_SPAN - tol:
            hi = HALF_SPAN
        if hi - lo > tol:
            cleaned.append([lo, hi])
    cleaned.sort()

    merged: list[list[float]] = []
    for lo, hi in cleaned:
        if merged and lo <= merged[-1][1] + tol:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return merged


def _absorb_residual(intervals: list[list[float]], residual: float) -> float:
    """
    Shift interior endpoints so the heavy length grows by residual.

    Endpoints at 0 and pi stay pinned and no endpoint crosses the midpoint of
    the gap to its neighbour. Intervals are visited from the last one; the
    part that could not be absorbed is returned.
    """
    remaining = residual
    for k in range(len(intervals) - 1, -1, -1):
        lo, hi = intervals[k]
        if hi < HALF_SPAN:
            if remaining > 0.0:
                room = (intervals[k + 1][0] - hi) / 2 if k + 1 < len(intervals) else HALF_SPAN - hi
            else:
                room = (hi - lo) / 2
            step = math.copysign(min(abs(remaining), room), remaining)
            if remaining > 0.0 and k + 1 == len(intervals) and step >= room:
                step, hi = HALF_SPAN - hi, HALF_SPAN
            else:
                hi += step
            remaining -= step
        if lo > 0.0 and remaining != 0.0:
            if remaining > 0.0:
                room = (lo - intervals[k - 1][1]) / 2 if k > 0 else lo
            else:
                room = (hi - lo) / 2
            step = math.copysign(min(abs(remaining), room), remaining)
            if remaining > 0.0 and k == 0 and step >= room:
                step, lo = lo, 0.0
            else:
                lo -= step
            remaining -= step
        intervals[k] = [lo, hi]
        if remaining == 0.0:
            break
    return remaining


def from_indicator(alpha: float, beta: float, heavy_set: Iterable[Sequence[float]]) -> Density:
    """
    Build the bang-bang density equal to beta on heavy_set and alpha elsewhere.

    A length mismatch up to the indicator tolerance is absorbed by moving interior
    endpoints, last interval first, so the returned density has mass 2*pi to rounding.

    Args:
        alpha: Light density.
        beta: Heavy density.
        heavy_set: Intervals (lo, hi) inside [0, pi].

    Returns:
        The bang-bang Density.

    Raises:
        DensityError: If the heavy length misses pi*(1-alpha)/(beta-alpha)
            by more than the indicator tolerance.
    """
    try:
        validate_material_bounds(alpha, beta, allow_homogeneous=False)
    except ParameterError as e:
        raise DensityError(str(e)) from None

    intervals = _normalize_intervals(heavy_set)
    target = heavy_fraction(alpha, beta) * math.pi
    length = math.fsum(hi - lo for lo, hi in intervals)
    residual = target - length
    if abs(residual) > INDICATOR_LENGTH_TOLERANCE:
        raise DensityError(
            f"Heavy set length {length:.12g} differs from required {target:.12g} "
            f"by {residual:.3e}"
        )

    if abs(residual) > _SNAP_THRESHOLD:
        leftover = _absorb_residual(intervals, residual)
        if abs(leftover) > _SNAP_THRESHOLD:
            raise DensityError(f"Heavy set {intervals} has no free endpoint to absorb {leftover:.3e}")
        logger.debug(f"Snapped heavy set by {residual:.3e} to restore mass")

    breakpoints: list[float] = []
    for lo, hi in intervals:
        if lo > 0.0:
            breakpoints.append(lo)
        if hi < HALF_SPAN:
            breakpoints.append(hi)
    first = beta if intervals and intervals[0][0] == 0.0 else alpha
    values = [first]
    for _ in breakpoints:
        values.append(alpha if values[-1] == beta else beta)

    return Density(alpha=alpha, beta=beta, breakpoints=tuple(breakpoints), values=tuple(values))
