# File: app/core/galerkin.py

"""
Weighted spectrum by expansion in the homogeneous eigenbasis.

The homogeneous (p = 1) eigenfunctions of each parity are orthonormal in
L2 and satisfy the integral of eta_i'' * eta_j'' = Lambda_i * delta_ij,
so the weighted problem reduces to the symmetric-definite pencil
diag(Lambda) c = lambda M c with M_ij the integral of p * eta_i * eta_j.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.linalg

from app.config.settings import SpectrumSettings, get_settings
from app.core.closed_form import eigenfunction_closed_form, find_parity_roots
from app.core.density import Density, PierLayout, homogeneous
from app.core.modes import ModeShape
from app.utils.constants import (
    DETERMINANT_GLUING,
    HALF_SPAN,
    MIN_GALERKIN_ORDER,
    ORIENTATION_SAMPLES,
    ORIENTATION_TOLERANCE,
    PARITY_EVEN,
    PARITY_ODD,
)
from app.utils.error_handlers import ParameterError, SpectrumError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class HomogeneousBasis:
    """N eigenpairs per parity of the homogeneous beam, L2-normalized."""

    a: float
    order: int
    even_values: np.ndarray
    odd_values: np.ndarray
    even: tuple[ModeShape, ...]
    odd: tuple[ModeShape, ...]

    def values(self, parity: str) -> np.ndarray:
        return self.even_values if parity == PARITY_EVEN else self.odd_values

    def shapes(self, parity: str) -> tuple[ModeShape, ...]:
        return self.even if parity == PARITY_EVEN else self.odd

    def sample(self, parity: str, x: np.ndarray, derivative: int = 0) -> np.ndarray:
        """(N, len(x)) matrix of basis values."""
        return np.vstack([np.atleast_1d(shape.evaluate(x, derivative)) for shape in self.shapes(parity)])


@lru_cache(maxsize=32)
def _cached_basis(a: float, order: int) -> HomogeneousBasis:
    layout = PierLayout(a)
    unit = homogeneous()
    parts = {}
    for parity in (PARITY_EVEN, PARITY_ODD):
        roots = find_parity_roots(unit, layout, parity, order, method=DETERMINANT_GLUING)
        shapes = tuple(eigenfunction_closed_form(root, unit, layout) for root in roots)
        parts[parity] = (np.array([root.lam for root in roots]), shapes)
    logger.info(f"Built homogeneous basis a={a}, N={order}")
    return HomogeneousBasis(
        a=a,
        order=order,
        even_values=parts[PARITY_EVEN][0],
        odd_values=parts[PARITY_ODD][0],
        even=parts[PARITY_EVEN][1],
        odd=parts[PARITY_ODD][1],
    )


def build_homogeneous_basis(layout: PierLayout, order: int | None = None) -> HomogeneousBasis:
    """
    Homogeneous eigenbasis for a pier layout, cached per (a, N).

    Args:
        layout: Pier layout.
        order: Basis functions per parity, at least 12 (default from settings).

    Returns:
        The shared HomogeneousBasis instance.
    """
    order = order or get_settings().spectrum.galerkin_order
    if order < MIN_GALERKIN_ORDER:
        raise ParameterError(f"Galerkin order must be at least {MIN_GALERKIN_ORDER}, got {order}")
    return _cached_basis(float(layout.a), int(order))


def _pairwise(shapes: tuple[ModeShape, ...], weight: Density | None) -> np.ndarray:
    n = len(shapes)
    out = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            out[i, j] = out[j, i] = shapes[i].inner(shapes[j], weight)
    return out


def weighted_gram(density: Density, basis: HomogeneousBasis, parity: str) -> np.ndarray:
    """M_ij = integral of p * eta_i * eta_j over the beam, from exact antiderivatives."""
    return _pairwise(basis.shapes(parity), density)


def stiffness_gram(basis: HomogeneousBasis, parity: str) -> np.ndarray:
    """K_ij = integral of eta_i'' * eta_j'' from the exact second derivatives."""
    return _pairwise(tuple(shape.derivative(2) for shape in basis.shapes(parity)), None)


@dataclass(frozen=True, eq=False)
class WeightedSpectrum:
    """
    First eigenpairs of the weighted problem, both parities merged by eigenvalue.

    coefficients[j] expands mode j+1 over the basis of parities[j].
    """

    density: Density
    layout: PierLayout
    basis: HomogeneousBasis
    eigenvalues: np.ndarray
    parities: tuple[str, ...]
    coefficients: tuple[np.ndarray, ...]
    gram: dict[str, np.ndarray] = field(default_factory=dict)

    @property
    def count(self) -> int:
        return len(self.eigenvalues)

    def evaluate(self, j: int, x: float | np.ndarray, derivative: int = 0) -> float | np.ndarray:
        return eigenfunction_eval(self, j, x, derivative)


def _orient(coefficients: np.ndarray, basis: HomogeneousBasis, parity: str) -> np.ndarray:
    grid = np.linspace(0.0, HALF_SPAN, ORIENTATION_SAMPLES)
    samples = coefficients @ basis.sample(parity, grid, 0 if parity == PARITY_EVEN else 1)
    value = samples[0]
    if abs(value) <= ORIENTATION_TOLERANCE * np.max(np.abs(samples)):
        value = samples[np.argmax(np.abs(samples))]
    return -coefficients if value < 0.0 else coefficients


def solve_weighted_spectrum(
    density: Density,
    layout: PierLayout,
    order: int | None = None,
    count: int | None = None,
    settings: SpectrumSettings | None = None,
) -> WeightedSpectrum:
    """
    Solve diag(Lambda) c = lambda M c per parity and merge the results.

    Eigenvectors come out M-orthonormal, so every eigenfunction already has
    unit p-weighted norm.

    Raises:
        SpectrumError: M is not positive definite or the eigensolver fails.
    """
    settings = settings or get_settings().spectrum
    count = count or settings.mode_count
    basis = build_homogeneous_basis(layout, order or settings.galerkin_order)
    if count > 2 * basis.order:
        raise ParameterError(f"Cannot return {count} modes from a basis of order {basis.order}")

    pool: list[tuple[float, str, np.ndarray]] = []
    grams = {}
    for parity in (PARITY_EVEN, PARITY_ODD):
        gram = weighted_gram(density, basis, parity)
        grams[parity] = gram
        try:
            values, vectors = scipy.linalg.eigh(np.diag(basis.values(parity)), gram)
        except (np.linalg.LinAlgError, ValueError) as e:
            raise SpectrumError(f"Generalized eigensolver failed for {parity} modes: {e}") from e
        logger.debug(f"{parity} Gram condition number {np.linalg.cond(gram):.3e}")
        for value, vector in zip(values, vectors.T):
            pool.append((float(value), parity, _orient(vector, basis, parity)))

    pool.sort(key=lambda item: item[0])
    pool = pool[:count]
    return WeightedSpectrum(
        density=density,
        layout=layout,
        basis=basis,
        eigenvalues=np.array([item[0] for item in pool]),
        parities=tuple(item[1] for item in pool),
        coefficients=tuple(item[2] for item in pool),
        gram=grams,
    )


def eigenfunction_eval(
    spectrum: WeightedSpectrum, j: int, x: float | np.ndarray, derivative: int = 0
) -> float | np.ndarray:
    """
    Evaluate the j-th (1-based) eigenfunction or one of its derivatives.

    Args:
        spectrum: Solved spectrum.
        j: Mode index in the merged ordering.
        x: Abscissae in [-pi, pi].
        derivative: Derivative order.

    Returns:
        Values with the shape of x.
    """
    if not 1 <= j <= spectrum.count:
        raise ParameterError(f"Mode index must be between 1 and {spectrum.count}, got {j}")
    parity = spectrum.parities[j - 1]
    values = spectrum.coefficients[j - 1] @ spectrum.basis.sample(parity, np.atleast_1d(x), derivative)
    return float(values[0]) if np.ndim(x) == 0 else values


def weighted_inner(spectrum: WeightedSpectrum, i: int, j: int) -> float:
    """Integral of p * e_i * e_j; zero across parities."""
    if spectrum.parities[i - 1] != spectrum.parities[j - 1]:
        return 0.0
    gram = spectrum.gram[spectrum.parities[i - 1]]
    return float(spectrum.coefficients[i - 1] @ gram @ spectrum.coefficients[j - 1])


def rayleigh_quotient(spectrum: WeightedSpectrum, j: int) -> float:
    """Integral of (e_j'')**2 over the integral of p * e_j**2, with exact second derivatives."""
    parity = spectrum.parities[j - 1]
    c = spectrum.coefficients[j - 1]
    stiffness = stiffness_gram(spectrum.basis, parity)
    return float(c @ stiffness @ c) / float(c @ spectrum.gram[parity] @ c)
