# File: app/core/stability.py

"""
Linear instability of bi-modal nonlinear oscillations.

A one-mode solution W(t) e_lambda(x) has W solving the Duffing equation
W'' + lambda W + W**3 = 0, W(0) = zeta, W'(0) = 0. A small residual
nu-mode xi then follows the Hill equation xi'' + (nu + W**2) xi = 0.
"""

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.special import ellipj, ellipk

from app.config.settings import StabilitySettings, get_settings
from app.schemas.records import PairRow
from app.utils.constants import (
    DEFAULT_MODE_COUNT,
    ENERGY_CONSISTENCY_TOLERANCE,
    MARGINAL,
    STABLE,
    UNSTABLE,
)
from app.utils.error_handlers import ConsistencyError, IntegrationError, ParameterError
from app.utils.validators import validate_mode_pair, validate_positive

logger = logging.getLogger(__name__)

# |zeta - D| below this fraction of D is not counted as a contradiction
ORIENTATION_BAND = 1e-3


def critical_amplitude(lam: float, nu: float) -> float:
    """D(lambda, nu) = sqrt(2 (nu - lambda))."""
    validate_mode_pair(lam, nu)
    return math.sqrt(2.0 * (nu - lam))


def critical_energy(lam: float, nu: float) -> float:
    """
    Duffing energy at the critical amplitude.

    Computes (nu/lambda - 1) * lambda * nu and checks it against
    lambda * D**2 / 2 + D**4 / 4.

    Raises:
        ParameterError: Unless 0 < lam < nu.
        ConsistencyError: The two forms disagree beyond rounding.
    """
    amplitude = critical_amplitude(lam, nu)
    energy = (nu / lam - 1.0) * lam * nu
    check = lam * amplitude**2 / 2.0 + amplitude**4 / 4.0
    if abs(energy - check) > ENERGY_CONSISTENCY_TOLERANCE * abs(energy):
        raise ConsistencyError(f"Critical energy forms disagree for ({lam}, {nu}): {energy!r} vs {check!r}")
    return energy


def ratio_label(j: int) -> str:
    """Label of the ratio lambda_{j+1}/lambda_j, e.g. '2/1'."""
    return f"{j + 1}/{j}"


@dataclass
class StabilityReport:
    """Critical amplitudes and energies over consecutive pairs, with their minimum."""

    pairs: list[PairRow]
    threshold: float
    argmin: int
    near_ties: list[int] = field(default_factory=list)

    @property
    def minimizing_pair(self) -> PairRow:
        return self.pairs[self.argmin - 1]

    @property
    def ratio(self) -> float:
        return self.minimizing_pair.ratio

    @property
    def ratio_label(self) -> str:
        return ratio_label(self.argmin)

    @property
    def near_tie_label(self) -> str:
        return " ".join(ratio_label(j) for j in self.near_ties)


def threshold(
    eigenvalues: Sequence[float],
    parities: Sequence[str] | None = None,
    count: int = DEFAULT_MODE_COUNT,
    near_tie: float | None = None,
) -> StabilityReport:
    """
    Minimum critical energy over the pairs (lambda_j, lambda_{j+1}), j < count.

    Args:
        eigenvalues: At least `count` strictly increasing eigenvalues.
        parities: Optional parity labels in the same order.
        count: Number of modes entering the minimum.
        near_tie: Relative band in which competing pairs are logged.

    Returns:
        The StabilityReport.
    """
    if len(eigenvalues) < count:
        raise ParameterError(f"Threshold needs {count} eigenvalues, got {len(eigenvalues)}")
    near_tie = get_settings().stability.near_tie if near_tie is None else near_tie
    values = [float(v) for v in eigenvalues[:count]]
    labels = list(parities[:count]) if parities is not None else [""] * count

    pairs = []
    for j in range(1, count):
        lam, nu = values[j - 1], values[j]
        pairs.append(
            PairRow(
                j=j,
                lam=lam,
                nu=nu,
                ratio=nu / lam,
                amplitude=critical_amplitude(lam, nu),
                energy=critical_energy(lam, nu),
                parities=f"{labels[j - 1]}/{labels[j]}" if parities is not None else "",
            )
        )
    best = min(pairs, key=lambda row: row.energy)
    rows = [row.model_copy(update={"is_minimum": row.j == best.j}) for row in pairs]
    ties = [row.j for row in rows if row.j != best.j and row.energy <= best.energy * (1.0 + near_tie)]
    if ties:
        logger.warning(
            f"Pairs {[ratio_label(j) for j in ties]} within {near_tie:.0%} of minimizing pair "
            f"{ratio_label(best.j)} (E={best.energy:.6g})"
        )
    return StabilityReport(pairs=rows, threshold=best.energy, argmin=best.j, near_ties=ties)


def _elliptic_parameters(lam: float, zeta: float) -> tuple[float, float]:
    validate_positive("lambda", lam)
    if zeta < 0.0:
        raise ParameterError(f"Amplitude zeta must be non-negative, got {zeta}")
    b = math.sqrt(lam + zeta * zeta)
    return b, zeta * zeta / (2.0 * b * b)


def duffing_period(lam: float, zeta: float) -> float:
    """T = 4 K(m) / b with b = sqrt(lambda + zeta**2) and m = zeta**2 / (2 b**2)."""
    b, m = _elliptic_parameters(lam, zeta)
    return 4.0 * float(ellipk(m)) / b


def duffing_profile(lam: float, zeta: float, t: float | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Exact orbit W = zeta * cn(b t | m) and its velocity."""
    b, m = _elliptic_parameters(lam, zeta)
    sn, cn, dn, _ = ellipj(b * np.asarray(t, dtype=float), m)
    return zeta * cn, -zeta * b * sn * dn


def duffing_energy(lam: float, displacement: np.ndarray, velocity: np.ndarray) -> np.ndarray:
    return velocity**2 / 2.0 + lam * displacement**2 / 2.0 + displacement**4 / 4.0


@dataclass(frozen=True, eq=False)
class DuffingOrbit:
    t: np.ndarray
    displacement: np.ndarray
    velocity: np.ndarray
    energy_drift: float


def duffing_orbit(
    lam: float,
    zeta: float,
    t_grid: Sequence[float] | np.ndarray,
    settings: StabilitySettings | None = None,
) -> DuffingOrbit:
    """
    Integrate the Duffing equation with DOP853 and sample it on t_grid.

    Raises:
        IntegrationError: Solver failure or relative energy drift above the configured bound.
    """
    settings = settings or get_settings().stability
    _elliptic_parameters(lam, zeta)
    t = np.asarray(t_grid, dtype=float)
    if zeta == 0.0:
        return DuffingOrbit(t=t, displacement=np.zeros_like(t), velocity=np.zeros_like(t), energy_drift=0.0)

    def rhs(_, y):
        return [y[1], -lam * y[0] - y[0] ** 3]

    solution = solve_ivp(
        rhs,
        (0.0, float(t.max())),
        [zeta, 0.0],
        method="DOP853",
        t_eval=t,
        rtol=settings.orbit_rtol,
        atol=settings.orbit_rtol * zeta,
    )
    if not solution.success:
        raise IntegrationError(f"Duffing integration failed: {solution.message}")

    w, v = solution.y
    energy0 = duffing_energy(lam, np.array(zeta), np.array(0.0))
    drift = float(np.max(np.abs(duffing_energy(lam, w, v) - energy0)) / energy0)
    if drift > settings.orbit_drift:
        raise IntegrationError(f"Duffing energy drift {drift:.3e} exceeds {settings.orbit_drift:.1e}")
    return DuffingOrbit(t=t, displacement=w, velocity=v, energy_drift=drift)


def _step_propagators(coefficient: np.ndarray, h: float) -> np.ndarray:
    """RK4 one-step propagators of xi'' = -q(t) xi, from q at t, t+h/2, t+h of every step."""
    q0, qm, q1 = coefficient[0:-1:2], coefficient[1::2], coefficient[2::2]
    n = q0.size

    def generator(q):
        a = np.zeros((n, 2, 2))
        a[:, 0, 1] = 1.0
        a[:, 1, 0] = -q
        return a

    eye = np.broadcast_to(np.eye(2), (n, 2, 2))
    a0, am, a1 = generator(q0), generator(qm), generator(q1)
    k1 = a0
    k2 = am @ (eye + 0.5 * h * k1)
    k3 = am @ (eye + 0.5 * h * k2)
    k4 = a1 @ (eye + h * k3)
    return eye + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _ordered_product(steps: np.ndarray) -> np.ndarray:
    """steps[n-1] @ ... @ steps[0] by pairwise reduction."""
    while steps.shape[0] > 1:
        if steps.shape[0] % 2:
            steps = np.concatenate([steps, np.eye(2)[None]], axis=0)
        steps = steps[1::2] @ steps[0::2]
    return steps[0]


def _monodromy_trace(lam: float, nu: float, zeta: float, period: float, steps: int) -> float:
    h = period / steps
    t = np.linspace(0.0, period, 2 * steps + 1)
    w, _ = duffing_profile(lam, zeta, t)
    return float(np.trace(_ordered_product(_step_propagators(nu + w**2, h))))


def classify_trace(trace: float, band: float) -> str:
    if abs(trace) < 2.0 - band:
        return STABLE
    if abs(trace) > 2.0 + band:
        return UNSTABLE
    return MARGINAL


def hill_monodromy(
    lam: float, nu: float, zeta: float, settings: StabilitySettings | None = None
) -> tuple[float, str]:
    """
    Trace of the Hill monodromy matrix over one Duffing period, and its classification.

    The step count starts at the configured value and doubles until the
    trace moves by less than the configured tolerance.

    Raises:
        IntegrationError: The trace did not settle within the refinement budget.
    """
    settings = settings or get_settings().stability
    validate_positive("lambda", lam)
    validate_positive("nu", nu)
    validate_positive("zeta", zeta)
    period = duffing_period(lam, zeta)

    steps = settings.monodromy_steps
    trace = _monodromy_trace(lam, nu, zeta, period, steps)
    for _ in range(settings.max_refinements):
        steps *= 2
        refined = _monodromy_trace(lam, nu, zeta, period, steps)
        change = abs(refined - trace)
        trace = refined
        if change < settings.monodromy_tolerance:
            break
    else:
        raise IntegrationError(
            f"Monodromy trace for ({lam}, {nu}, {zeta}) did not settle: last change {change:.3e}"
        )
    return trace, classify_trace(trace, settings.marginal_band)


def classify_analytic(lam: float, nu: float, zeta: float) -> str:
    """Stable iff lambda > nu, or lambda < nu and zeta <= sqrt(2 (nu - lambda))."""
    if lam == nu:
        raise ParameterError(f"Analytic rule needs lambda != nu, got {lam}")
    validate_positive("zeta", zeta)
    if lam > nu:
        return STABLE
    return STABLE if zeta <= math.sqrt(2.0 * (nu - lam)) else UNSTABLE


@dataclass
class OrientationReport:
    agreements: int = 0
    marginal: int = 0
    contradictions: list[tuple[float, float, float, str, str]] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.agreements + self.marginal + len(self.contradictions)


def cross_check_orientation(
    pairs: Iterable[tuple[float, float]],
    zetas: Sequence[float],
    settings: StabilitySettings | None = None,
) -> OrientationReport:
    """
    Compare hill_monodromy against classify_analytic.

    Args:
        pairs: (lambda, nu) pairs in either order.
        zetas: Amplitudes relative to D(min, max) of each pair.

    Returns:
        Counts of agreements and marginal cases, plus every contradiction.
    """
    report = OrientationReport()
    for lam, nu in pairs:
        scale = critical_amplitude(min(lam, nu), max(lam, nu))
        for rel in zetas:
            zeta = rel * scale
            _, numeric = hill_monodromy(lam, nu, zeta, settings)
            analytic = classify_analytic(lam, nu, zeta)
            near_boundary = lam < nu and abs(zeta - scale) < ORIENTATION_BAND * scale
            if numeric == analytic:
                report.agreements += 1
            elif numeric == MARGINAL or near_boundary:
                report.marginal += 1
            else:
                report.contradictions.append((lam, nu, zeta, numeric, analytic))
                logger.warning(
                    f"Monodromy says {numeric}, analytic rule says {analytic} "
                    f"for lambda={lam}, nu={nu}, zeta={zeta}"
                )
    return report
