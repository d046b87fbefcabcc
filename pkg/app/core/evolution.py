# File: app/core/evolution.py

"""
Time integration of the Galerkin-reduced nonlinear beam.

With u = sum c_j(t) e_j(x) over p-orthonormal eigenmodes the coefficients obey

    c_j'' + lambda_j c_j + (sum_k c_k**2) c_j = 0,

a Hamiltonian system with energy
1/2 sum c_j'**2 + 1/2 sum lambda_j c_j**2 + 1/4 (sum c_j**2)**2.
"""

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, replace

import numpy as np

from app.config.settings import EvolutionSettings, get_settings
from app.core.galerkin import WeightedSpectrum, eigenfunction_eval
from app.core.stability import duffing_period
from app.utils.constants import HALF_SPAN, MAX_RESIDUAL_RATIO
from app.utils.error_handlers import IntegrationError, ParameterError
from app.utils.validators import validate_mode_count, validate_positive

logger = logging.getLogger(__name__)

# Fourth-order triple-jump composition of velocity Verlet
_CBRT2 = 2.0 ** (1.0 / 3.0)
_OUTER = 1.0 / (2.0 - _CBRT2)
_INNER = -_CBRT2 / (2.0 - _CBRT2)
_QUADRATURE_NODES = 64


@dataclass(frozen=True, eq=False)
class ModalState:
    """Coefficients, velocities and eigenvalues of the active modes at time t."""

    positions: np.ndarray
    velocities: np.ndarray
    eigenvalues: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        n = len(self.eigenvalues)
        if len(self.positions) != n or len(self.velocities) != n:
            raise ParameterError(
                f"State dimensions differ: {len(self.positions)}, {len(self.velocities)}, {n}"
            )
        if not (np.all(np.isfinite(self.positions)) and np.all(np.isfinite(self.velocities))):
            raise ParameterError("State contains non-finite values")

    @property
    def size(self) -> int:
        return len(self.eigenvalues)


def total_energy(positions: np.ndarray, velocities: np.ndarray, eigenvalues: np.ndarray) -> np.ndarray:
    """Energy of one state (1-D arrays) or of a series of states (rows)."""
    squares = np.sum(positions**2, axis=-1)
    return (
        0.5 * np.sum(velocities**2, axis=-1)
        + 0.5 * np.sum(eigenvalues * positions**2, axis=-1)
        + 0.25 * squares**2
    )


def modal_energies(positions: np.ndarray, velocities: np.ndarray, eigenvalues: np.ndarray) -> np.ndarray:
    return 0.5 * velocities**2 + 0.5 * eigenvalues * positions**2


Profile = Callable[[np.ndarray], np.ndarray] | Sequence[float] | None


def _quadrature_grid(spectrum: WeightedSpectrum) -> tuple[np.ndarray, np.ndarray]:
    cuts = np.union1d(np.asarray(spectrum.density.nodes), [spectrum.layout.pier])
    cuts = np.union1d(cuts, -cuts)
    nodes, weights = np.polynomial.legendre.leggauss(_QUADRATURE_NODES)
    lo, hi = cuts[:-1, None], cuts[1:, None]
    x = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
    w = 0.5 * (hi - lo) * weights
    return x.ravel(), w.ravel()


def _project(profile: Profile, spectrum: WeightedSpectrum, n: int) -> np.ndarray:
    if profile is None:
        return np.zeros(n)
    if not callable(profile):
        weights = np.zeros(n)
        given = np.asarray(profile, dtype=float)[:n]
        weights[: len(given)] = given
        return weights
    x, w = _quadrature_grid(spectrum)
    weighted = w * np.asarray(spectrum.density.evaluate(x)) * np.asarray(profile(x), dtype=float)
    return np.array([weighted @ eigenfunction_eval(spectrum, j, x) for j in range(1, n + 1)])


def project_initial(
    g_profile: Profile, h_profile: Profile, spectrum: WeightedSpectrum, n: int
) -> ModalState:
    """
    Initial modal state from displacement g and velocity h.

    Each profile is a callable of x on [-pi, pi], a sequence of mode
    weights, or None for zero. Callables are projected with the p-weighted
    inner product, by Gauss-Legendre quadrature on every constant piece.
    """
    validate_mode_count(n, spectrum.count)
    return ModalState(
        positions=_project(g_profile, spectrum, n),
        velocities=_project(h_profile, spectrum, n),
        eigenvalues=np.asarray(spectrum.eigenvalues[:n], dtype=float),
    )


def _acceleration(positions: np.ndarray, eigenvalues: np.ndarray) -> np.ndarray:
    return -(eigenvalues + positions @ positions) * positions


def step_rhs(state: ModalState) -> tuple[np.ndarray, np.ndarray]:
    """Time derivatives (c', c'') of the modal system."""
    return state.velocities.copy(), _acceleration(state.positions, state.eigenvalues)


def _verlet(c: np.ndarray, v: np.ndarray, lam: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    v = v + 0.5 * h * _acceleration(c, lam)
    c = c + h * v
    v = v + 0.5 * h * _acceleration(c, lam)
    return c, v


def _yoshida(c: np.ndarray, v: np.ndarray, lam: np.ndarray, h: float) -> tuple[np.ndarray, np.ndarray]:
    c, v = _verlet(c, v, lam, _OUTER * h)
    c, v = _verlet(c, v, lam, _INNER * h)
    return _verlet(c, v, lam, _OUTER * h)


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    eigenvalues: np.ndarray
    energy: np.ndarray
    drift: float

    @property
    def final(self) -> ModalState:
        return ModalState(
            positions=self.positions[-1].copy(),
            velocities=self.velocities[-1].copy(),
            eigenvalues=self.eigenvalues,
            t=float(self.times[-1]),
        )

    @property
    def mode_energies(self) -> np.ndarray:
        return modal_energies(self.positions, self.velocities, self.eigenvalues)


def default_step(eigenvalues: np.ndarray, steps_per_period: int) -> float:
    """Shortest linear period of the active modes over the step count."""
    return 2.0 * math.pi / math.sqrt(float(np.max(eigenvalues))) / steps_per_period


def simulate(
    state0: ModalState,
    t_end: float,
    dt: float | None = None,
    settings: EvolutionSettings | None = None,
) -> Trajectory:
    """
    Integrate from state0 over a span of t_end with fixed steps.

    The step is shrunk so that a whole number of steps covers t_end.

    Raises:
        ParameterError: dt <= 0 or t_end <= 0.
        IntegrationError: Relative energy drift above the configured bound.
    """
    settings = settings or get_settings().evolution
    validate_positive("t_end", t_end)
    if dt is None:
        dt = default_step(state0.eigenvalues, settings.steps_per_period)
    validate_positive("dt", dt)
    steps = max(1, math.ceil(t_end / dt - 1e-9))
    h = t_end / steps

    lam = state0.eigenvalues
    c, v = state0.positions.astype(float), state0.velocities.astype(float)
    times, cs, vs = [state0.t], [c], [v]
    for step in range(1, steps + 1):
        c, v = _yoshida(c, v, lam, h)
        if step % settings.record_every == 0 or step == steps:
            times.append(state0.t + step * h)
            cs.append(c)
            vs.append(v)

    positions, velocities = np.array(cs), np.array(vs)
    energy = total_energy(positions, velocities, lam)
    drift = float(np.max(np.abs(energy - energy[0])) / energy[0]) if energy[0] > 0.0 else 0.0
    if drift > settings.drift_tolerance:
        raise IntegrationError(f"Energy drift {drift:.3e} exceeds {settings.drift_tolerance:.1e}")
    logger.debug(f"Simulated {steps} steps of {h:.3e}, drift {drift:.3e}")
    return Trajectory(
        times=np.array(times),
        positions=positions,
        velocities=velocities,
        eigenvalues=lam,
        energy=energy,
        drift=drift,
    )


@dataclass(frozen=True)
class TransferResult:
    """Energy fraction of the residual mode over a bi-modal run."""

    transfer: float
    initial_fraction: float
    growth: float
    periods: float
    drift: float
    trajectory: Trajectory

    @property
    def grew(self) -> bool:
        return self.growth >= get_settings().evolution.growth_target


def bimodal_experiment(
    pair: tuple[float, float],
    zeta: float,
    z0: float,
    periods: float | None = None,
    settings: EvolutionSettings | None = None,
) -> TransferResult:
    """
    Run the two-mode system from w(0) = zeta, z(0) = z0 at rest.

    The run stops after `periods` prevailing-mode periods (default from
    settings), or as soon as the residual energy fraction has grown by the
    configured factor.

    Args:
        pair: (lambda, nu) of the prevailing and residual modes.
        zeta: Prevailing amplitude.
        z0: Residual amplitude, at most 1e-3 * zeta.

    Returns:
        Maximum residual energy fraction, its growth factor and the trajectory.
    """
    settings = settings or get_settings().evolution
    lam, nu = pair
    validate_positive("lambda", lam)
    validate_positive("nu", nu)
    validate_positive("zeta", zeta)
    if not 0.0 <= z0 <= MAX_RESIDUAL_RATIO * zeta:
        raise ParameterError(f"Residual amplitude must satisfy 0 <= z0 <= {MAX_RESIDUAL_RATIO}*zeta, got {z0}")
    periods = periods or settings.max_periods

    state = ModalState(
        positions=np.array([zeta, z0]),
        velocities=np.zeros(2),
        eigenvalues=np.array([lam, nu]),
    )
    period = duffing_period(lam, zeta)
    dt = default_step(state.eigenvalues, settings.steps_per_period)
    energy0 = float(total_energy(state.positions, state.velocities, state.eigenvalues))
    initial = modal_energies(state.positions, state.velocities, state.eigenvalues)[1] / energy0

    chunk = 10.0
    pieces = []
    done = 0.0
    transfer = initial
    while done < periods:
        span = min(chunk, periods - done)
        run = simulate(state, span * period, dt, settings)
        pieces.append(run if not pieces else _tail(run))
        fraction = run.mode_energies[:, 1] / run.energy
        transfer = max(transfer, float(np.max(fraction)))
        state = run.final
        done += span
        if initial > 0.0 and transfer / initial >= settings.growth_target:
            break

    trajectory = _concatenate(pieces)
    drift = float(np.max(np.abs(trajectory.energy - energy0)) / energy0)
    if drift > settings.drift_tolerance:
        raise IntegrationError(f"Energy drift {drift:.3e} exceeds {settings.drift_tolerance:.1e}")
    growth = transfer / initial if initial > 0.0 else 0.0
    logger.info(
        f"Bi-modal run lambda={lam:.6g} nu={nu:.6g} zeta={zeta:.6g}: transfer {transfer:.3e}, "
        f"growth {growth:.3g} over {done:g} periods"
    )
    return TransferResult(
        transfer=transfer if z0 > 0.0 else 0.0,
        initial_fraction=initial,
        growth=growth,
        periods=done,
        drift=drift,
        trajectory=trajectory,
    )


def _tail(run: Trajectory) -> Trajectory:
    return replace(
        run,
        times=run.times[1:],
        positions=run.positions[1:],
        velocities=run.velocities[1:],
        energy=run.energy[1:],
    )


def _concatenate(pieces: list[Trajectory]) -> Trajectory:
    first = pieces[0]
    return Trajectory(
        times=np.concatenate([p.times for p in pieces]),
        positions=np.concatenate([p.positions for p in pieces]),
        velocities=np.concatenate([p.velocities for p in pieces]),
        eigenvalues=first.eigenvalues,
        energy=np.concatenate([p.energy for p in pieces]),
        drift=max(p.drift for p in pieces),
    )


def displacement(spectrum: WeightedSpectrum, state: ModalState, x: np.ndarray) -> np.ndarray:
    """u(x, t) = sum c_j e_j(x) for the state's modes."""
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > HALF_SPAN):
        raise ParameterError("Abscissae must lie in [-pi, pi]")
    return sum(state.positions[j] * eigenfunction_eval(spectrum, j + 1, x) for j in range(state.size))
