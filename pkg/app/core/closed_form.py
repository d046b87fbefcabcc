# File: app/core/closed_form.py

"""
Closed-form spectrum of the hinged beam with piers at +-a*pi.

Eigenvalues are roots mu (lambda = mu**4) of determinant functions built
from the trigonometric/hyperbolic solutions on each constant-density piece.
Two formulations are provided:

- the reduced 4x4 systems (and the scalar relations for rho = a) of the
  two-step density, selected with method="reduced";
- the full interface ("gluing") system, valid for any symmetric
  piecewise-constant density, selected with method="gluing" (default).

Both are scanned on a uniform mu grid and refined by bisection.
"""

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from app.config.settings import SpectrumSettings, get_settings
from app.core.density import Density, PierLayout
from app.core.modes import ModeShape, basis_derivatives, oriented
from app.utils.constants import (
    BREAKPOINT_MERGE_TOLERANCE,
    CASE_RHO_EQ_A,
    CASE_RHO_GT_A,
    CASE_RHO_LT_A,
    CASE_TOLERANCE,
    DETERMINANT_GLUING,
    DETERMINANT_REDUCED,
    HALF_SPAN,
    MAX_BISECTIONS,
    NULL_SPACE_RATIO,
    PARITY_EVEN,
    PARITY_ODD,
    SCAN_CHUNK,
)
from app.utils.error_handlers import (
    ParameterError,
    RootFindingError,
    SimplicityError,
)
from app.utils.validators import validate_pier_parameter, validate_positive

logger = logging.getLogger(__name__)

PARITIES = (PARITY_EVEN, PARITY_ODD)


@dataclass(frozen=True)
class TwoStepParams:
    """
    Parameters of the reduced two-step systems.

    Attributes:
        sigma: Fourth root of the density away from the center.
        tau: Fourth root of the density around x = 0.
        rho: Jump parameter; the jump sits at rho*pi.
        a: Pier parameter.
    """

    sigma: float
    tau: float
    rho: float
    a: float

    def __post_init__(self):
        validate_positive("sigma", self.sigma)
        validate_positive("tau", self.tau)
        validate_pier_parameter(self.a)
        if not 0.0 < self.rho < 1.0:
            raise ParameterError(f"Jump parameter rho must satisfy 0 < rho < 1, got {self.rho}")

    @property
    def delta(self) -> float:
        return self.tau / self.sigma

    @property
    def case(self) -> str:
        if abs(self.rho - self.a) <= CASE_TOLERANCE:
            return CASE_RHO_EQ_A
        return CASE_RHO_GT_A if self.rho > self.a else CASE_RHO_LT_A

    @classmethod
    def from_density(cls, density: Density, layout: PierLayout) -> "TwoStepParams":
        """
        Read the reduced parameters off a constant or two-step density.

        A constant density is treated as a two-step one with equal
        materials and the jump placed on the pier.
        """
        if density.is_constant:
            root = density.values[0] ** 0.25
            return cls(sigma=root, tau=root, rho=layout.a, a=layout.a)
        if density.jump_count != 1:
            raise ParameterError(
                f"Reduced systems need at most one jump per half-beam, got {density.jump_count}"
            )
        return cls(
            sigma=density.values[1] ** 0.25,
            tau=density.values[0] ** 0.25,
            rho=density.breakpoints[0] / math.pi,
            a=layout.a,
        )


@dataclass(frozen=True)
class EigenRoot:
    """A refined root mu of a determinant function."""

    mu: float
    parity: str
    case: str | None = None

    @property
    def lam(self) -> float:
        return self.mu**4


# Reduced systems


def _normalize_rows(matrices: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(matrices), axis=-1, keepdims=True)
    return matrices / np.where(scale > 0.0, scale, 1.0)


def _rho_above_pier(mu: np.ndarray, params: TwoStepParams, parity: str) -> np.ndarray:
    t = mu * params.tau
    s_ = mu * params.sigma
    d = params.delta
    p, q = 1.0 - d * d, 1.0 + d * d
    x = t * params.a * math.pi
    c, s, ch, sh = np.cos(x), np.sin(x), np.cosh(x), np.sinh(x)
    u = t * params.rho * math.pi
    v = s_ * (params.rho - 1.0) * math.pi
    cu, su, chu, shu = np.cos(u), np.sin(u), np.cosh(u), np.sinh(u)
    cv, sv, chv, shv = np.cos(v), np.sin(v), np.cosh(v), np.sinh(v)

    if parity == PARITY_EVEN:
        row1 = [c * c * sh, ch + s * c * sh, c * sh * ch, c * ch * ch]
    else:
        row1 = [sh - s * c * ch, -s * s * ch, -s * sh * sh, -s * sh * ch]
    row2 = [c, s, ch, sh]
    row3 = [
        p * (cu * chv + d * su * shv),
        p * (su * chv - d * cu * shv),
        q * (chu * chv - d * shu * shv),
        q * (shu * chv - d * chu * shv),
    ]
    row4 = [
        q * (cu * cv + d * su * sv),
        q * (su * cv - d * cu * sv),
        p * (chu * cv - d * shu * sv),
        p * (shu * cv - d * chu * sv),
    ]
    return np.stack([np.stack(row, axis=-1) for row in (row1, row2, row3, row4)], axis=-2)


def _rho_below_pier(mu: np.ndarray, params: TwoStepParams, parity: str) -> np.ndarray:
    t = mu * params.tau
    s_ = mu * params.sigma
    d = params.delta
    p, q = 1.0 - d * d, 1.0 + d * d
    x = s_ * params.a * math.pi
    c, s, ch, sh = np.cos(x), np.sin(x), np.cosh(x), np.sinh(x)
    v = s_ * (params.a - 1.0) * math.pi
    cv, sv, chv, shv = np.cos(v), np.sin(v), np.cosh(v), np.sinh(v)
    xa = s_ * params.rho * math.pi
    xb = t * params.rho * math.pi
    ca, sa, cha, sha = np.cos(xa), np.sin(xa), np.cosh(xa), np.sinh(xa)
    cb, sb, chb, shb = np.cos(xb), np.sin(xb), np.cosh(xb), np.sinh(xb)

    row1 = [c, s, ch, sh]
    row2 = [
        c * cv * shv - c * chv * sv + s * sv * shv,
        s * cv * shv - s * chv * sv - c * sv * shv,
        -sh * sv * shv,
        -ch * sv * shv,
    ]
    if parity == PARITY_EVEN:
        row3 = [
            p * (sa * chb + d * ca * shb),
            -p * (ca * chb - d * sa * shb),
            q * (sha * chb - d * cha * shb),
            q * (cha * chb - d * sha * shb),
        ]
        row4 = [
            q * (sa * cb - d * ca * sb),
            -q * (ca * cb + d * sa * sb),
            p * (sha * cb + d * cha * sb),
            p * (cha * cb + d * sha * sb),
        ]
    else:
        row3 = [
            p * (sa * shb + d * ca * chb),
            -p * (ca * shb - d * sa * chb),
            q * (sha * shb - d * cha * chb),
            q * (cha * shb - d * sha * chb),
        ]
        row4 = [
            q * (-sa * sb - d * ca * cb),
            q * (ca * sb - d * sa * cb),
            p * (-sha * sb + d * cha * cb),
            p * (-cha * sb + d * sha * cb),
        ]
    return np.stack([np.stack(row, axis=-1) for row in (row1, row2, row3, row4)], axis=-2)


def _rho_on_pier(mu: np.ndarray, params: TwoStepParams, parity: str) -> np.ndarray:
    """Scalar relation for rho = a, multiplied through to remove its poles."""
    d = params.delta
    u = mu * math.pi * params.tau * params.rho
    s = mu * math.pi * params.sigma * (1.0 - params.rho)
    cu, su = np.cos(u), np.sin(u)
    cs, ss, ts = np.cos(s), np.sin(s), np.tanh(s)
    if parity == PARITY_EVEN:
        return d * cu * cs * ts - ss * (d * cu + ts * (su + cu * np.tanh(u)))
    return d * su * (ss - cs * ts) - (cu - su * np.cosh(u) / np.sinh(u)) * ss * ts


def reduced_determinant(mu: float | np.ndarray, params: TwoStepParams, parity: str) -> float | np.ndarray:
    """
    Reduced determinant function of the two-step density.

    Rows of the 4x4 systems are rescaled to unit max-norm, which keeps the
    sign pattern and avoids overflow of the hyperbolic entries.
    """
    mu_arr = np.atleast_1d(np.asarray(mu, dtype=float))
    case = params.case
    if case == CASE_RHO_EQ_A:
        values = _rho_on_pier(mu_arr, params, parity)
    else:
        build = _rho_above_pier if case == CASE_RHO_GT_A else _rho_below_pier
        sign, logdet = np.linalg.slogdet(_normalize_rows(build(mu_arr, params, parity)))
        values = sign * np.exp(logdet)
    return float(values[0]) if np.ndim(mu) == 0 else values


def det_even(mu: float | np.ndarray, params: TwoStepParams) -> float | np.ndarray:
    """Even-parity determinant; its positive roots are the even eigenvalues' fourth roots."""
    return reduced_determinant(mu, params, PARITY_EVEN)


def det_odd(mu: float | np.ndarray, params: TwoStepParams) -> float | np.ndarray:
    """Odd-parity determinant."""
    return reduced_determinant(mu, params, PARITY_ODD)


# Interface system


@dataclass(frozen=True)
class HalfBeamPartition:
    """Pieces of [0, pi] on which the density is constant, split at the pier."""

    nodes: np.ndarray
    values: np.ndarray
    pier_node: int

    @property
    def piece_count(self) -> int:
        return len(self.values)

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.nodes)


def half_beam_partition(density: Density, layout: PierLayout) -> HalfBeamPartition:
    """Merge density breakpoints and the pier into one partition of [0, pi]."""
    nodes = [0.0]
    for b in sorted([*density.breakpoints, layout.pier]):
        if b - nodes[-1] > BREAKPOINT_MERGE_TOLERANCE:
            nodes.append(b)
        elif abs(b - layout.pier) <= BREAKPOINT_MERGE_TOLERANCE:
            nodes[-1] = layout.pier
    nodes.append(HALF_SPAN)
    nodes_arr = np.asarray(nodes)
    mids = 0.5 * (nodes_arr[:-1] + nodes_arr[1:])
    values = np.asarray(density.evaluate(mids), dtype=float)
    pier_node = int(np.argmin(np.abs(nodes_arr - layout.pier)))
    return HalfBeamPartition(nodes=nodes_arr, values=values, pier_node=pier_node)


def _gluing_batch(mu: np.ndarray, partition: HalfBeamPartition, parity: str) -> np.ndarray:
    size = 4 * partition.piece_count
    roots = partition.values**0.25
    lengths = partition.lengths
    k = mu[:, None] * roots[None, :]
    out = np.zeros((mu.size, size, size))

    def block(piece: int, left_end: bool, order: int) -> np.ndarray:
        t = 0.0 if left_end else lengths[piece]
        s = -lengths[piece] if left_end else 0.0
        # (k/mu)**order keeps every row bounded
        return basis_derivatives(k[:, piece], t, s, order) * roots[piece] ** order

    def cols(piece: int) -> slice:
        return slice(4 * piece, 4 * piece + 4)

    row = 0
    for order in (1, 3) if parity == PARITY_EVEN else (0, 2):
        out[:, row, cols(0)] = block(0, True, order)
        row += 1
    for node in range(1, partition.piece_count):
        left, right = node - 1, node
        if node == partition.pier_node:
            out[:, row, cols(left)] = block(left, False, 0)
            out[:, row + 1, cols(right)] = block(right, True, 0)
            row += 2
            orders = (1, 2)
        else:
            orders = (0, 1, 2, 3)
        for order in orders:
            out[:, row, cols(left)] = block(left, False, order)
            out[:, row, cols(right)] = -block(right, True, order)
            row += 1
    last = partition.piece_count - 1
    for order in (0, 2):
        out[:, row, cols(last)] = block(last, False, order)
        row += 1
    return out


def gluing_matrix(mu: float, density: Density, layout: PierLayout, parity: str) -> np.ndarray:
    """
    Interface system whose kernel holds the eigenfunction of the given parity.

    Unknowns are the four local-basis weights on each piece of the half-beam.
    Rows impose the parity conditions at 0, C3 continuity at density jumps,
    e = 0 with C2 continuity at the pier, and e = e'' = 0 at pi.
    """
    partition = half_beam_partition(density, layout)
    return _gluing_batch(np.array([float(mu)]), partition, parity)[0]


def gluing_determinant(
    mu: float | np.ndarray, density: Density, layout: PierLayout, parity: str
) -> float | np.ndarray:
    partition = half_beam_partition(density, layout)
    mu_arr = np.atleast_1d(np.asarray(mu, dtype=float))
    sign, logdet = np.linalg.slogdet(_gluing_batch(mu_arr, partition, parity))
    values = sign * np.exp(logdet)
    return float(values[0]) if np.ndim(mu) == 0 else values


# Root finding

SignFunction = Callable[[np.ndarray], np.ndarray]


def _gluing_sign(partition: HalfBeamPartition, parity: str) -> SignFunction:
    return lambda mu: np.linalg.slogdet(_gluing_batch(mu, partition, parity))[0]


def _reduced_sign(params: TwoStepParams, parity: str) -> SignFunction:
    return lambda mu: np.sign(reduced_determinant(mu, params, parity))


def _bisect(sign_fn: SignFunction, lo: np.ndarray, hi: np.ndarray, tolerance: float) -> np.ndarray:
    sign_lo = sign_fn(lo)
    for _ in range(MAX_BISECTIONS):
        if np.max(hi - lo) <= tolerance:
            break
        mid = 0.5 * (lo + hi)
        sign_mid = sign_fn(mid)
        same = sign_mid == sign_lo
        exact = sign_mid == 0.0
        lo = np.where(same | exact, mid, lo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def _scan_roots(
    sign_fns: dict[str, SignFunction], count: int, settings: SpectrumSettings
) -> dict[str, list[float]]:
    """Bracket and refine roots chunk by chunk until `count` are found in total."""
    step = settings.scan_step
    n_points = int(math.floor(settings.mu_ceiling / step + 1e-9))
    per_chunk = max(1, int(round(SCAN_CHUNK / step)))
    found: dict[str, list[float]] = {parity: [] for parity in sign_fns}
    previous: dict[str, tuple[float, float] | None] = {parity: None for parity in sign_fns}

    start = 1
    while start <= n_points:
        stop = min(start + per_chunk - 1, n_points)
        grid = np.arange(start, stop + 1) * step
        for parity, sign_fn in sign_fns.items():
            signs = sign_fn(grid)
            found[parity].extend(grid[signs == 0.0].tolist())
            if previous[parity] is not None:
                mus = np.concatenate(([previous[parity][0]], grid))
                full = np.concatenate(([previous[parity][1]], signs))
            else:
                mus, full = grid, signs
            brackets = np.nonzero(full[:-1] * full[1:] < 0.0)[0]
            if brackets.size:
                roots = _bisect(sign_fn, mus[brackets], mus[brackets + 1], settings.root_tolerance)
                found[parity].extend(roots.tolist())
            previous[parity] = (float(grid[-1]), float(signs[-1]))
        total = sum(len(v) for v in found.values())
        logger.debug(f"Scanned mu up to {grid[-1]:.2f}: {total} roots")
        if total >= count:
            break
        start = stop + 1

    total = sum(len(v) for v in found.values())
    if total < count:
        detail = ", ".join(f"{parity}={len(v)}" for parity, v in found.items())
        raise RootFindingError(
            f"Found {total} of {count} roots below mu={settings.mu_ceiling} ({detail})"
        )
    return {parity: sorted(v) for parity, v in found.items()}


def _check_simple(roots: Sequence[EigenRoot], gap: float) -> None:
    for lower, upper in zip(roots, roots[1:]):
        if upper.mu - lower.mu < gap:
            raise SimplicityError(
                f"Roots {lower.mu:.15g} ({lower.parity}) and {upper.mu:.15g} ({upper.parity}) "
                f"are closer than {gap:g}"
            )


def _merge(found: dict[str, list[float]], case: str | None, count: int, gap: float) -> list[EigenRoot]:
    roots = sorted(
        (EigenRoot(mu=mu, parity=parity, case=case) for parity, mus in found.items() for mu in mus),
        key=lambda r: r.mu,
    )
    _check_simple(roots, gap)
    return roots[:count]


def roots_from_params(
    params: TwoStepParams,
    count: int,
    parities: Sequence[str] = PARITIES,
    settings: SpectrumSettings | None = None,
) -> list[EigenRoot]:
    """First `count` roots of the reduced systems for the given parities."""
    settings = settings or get_settings().spectrum
    sign_fns = {parity: _reduced_sign(params, parity) for parity in parities}
    found = _scan_roots(sign_fns, count, settings)
    return _merge(found, params.case, count, settings.simplicity_gap)


def find_parity_roots(
    density: Density,
    layout: PierLayout,
    parity: str,
    count: int,
    method: str | None = None,
    settings: SpectrumSettings | None = None,
) -> list[EigenRoot]:
    """First `count` roots of one parity."""
    return _find(density, layout, count, (parity,), method, settings)


def find_eigenvalues(
    density: Density,
    layout: PierLayout,
    count: int = 12,
    method: str | None = None,
    settings: SpectrumSettings | None = None,
) -> list[EigenRoot]:
    """
    First `count` eigenvalues of the weighted problem, both parities merged.

    Args:
        density: Piecewise-constant density; method="reduced" needs at most one jump.
        layout: Pier layout.
        count: Number of roots to return.
        method: "gluing" or "reduced"; defaults to the configured determinant.
        settings: Spectrum settings override.

    Returns:
        Roots ordered by mu, each labelled with its parity.

    Raises:
        RootFindingError: Fewer than `count` roots below the scan ceiling.
        SimplicityError: Two roots closer than the simplicity gap.
    """
    roots = _find(density, layout, count, PARITIES, method, settings)
    violations = parity_alternation_violations(roots)
    if violations:
        logger.warning(f"Parity alternation broken at indices {violations} (a={layout.a})")
    return roots


def _find(
    density: Density,
    layout: PierLayout,
    count: int,
    parities: Sequence[str],
    method: str | None,
    settings: SpectrumSettings | None,
) -> list[EigenRoot]:
    if count < 1:
        raise ParameterError(f"Root count must be at least 1, got {count}")
    settings = settings or get_settings().spectrum
    method = method or settings.determinant

    case = None
    if density.jump_count <= 1:
        case = TwoStepParams.from_density(density, layout).case
    if method == DETERMINANT_REDUCED:
        params = TwoStepParams.from_density(density, layout)
        return roots_from_params(params, count, parities, settings)
    if method != DETERMINANT_GLUING:
        raise ParameterError(f"Unknown determinant method {method!r}")

    partition = half_beam_partition(density, layout)
    sign_fns = {parity: _gluing_sign(partition, parity) for parity in parities}
    found = _scan_roots(sign_fns, count, settings)
    roots = _merge(found, case, count, settings.simplicity_gap)
    logger.debug(f"Found {len(roots)} roots for a={layout.a}, jumps={density.jump_count}")
    return roots


def eigenfunction_closed_form(root: EigenRoot, density: Density, layout: PierLayout) -> ModeShape:
    """
    Eigenfunction for a refined root, normalized so that the integral of p*e**2 is one.

    The kernel of the interface system at mu gives the local-basis weights
    on every piece; ModeShape.to_trig_hyperbolic exports them in the
    cos/sin/cosh/sinh form.

    Raises:
        SimplicityError: The kernel is numerically two-dimensional.
    """
    partition = half_beam_partition(density, layout)
    matrix = _gluing_batch(np.array([root.mu]), partition, root.parity)[0]
    _, singular, vt = np.linalg.svd(matrix)
    if singular[-2] / singular[0] < NULL_SPACE_RATIO:
        raise SimplicityError(
            f"Kernel at mu={root.mu:.12g} is not one-dimensional "
            f"(singular values {singular[-2]:.3e}, {singular[-1]:.3e})"
        )
    logger.debug(f"Kernel residual at mu={root.mu:.12g}: {singular[-1] / singular[0]:.3e}")

    shape = ModeShape(
        parity=root.parity,
        nodes=partition.nodes,
        wavenumbers=root.mu * partition.values**0.25,
        coefficients=vt[-1].reshape(partition.piece_count, 4),
        eigenvalue=root.lam,
    )
    shape = shape.scaled(1.0 / shape.norm(density))
    return oriented(shape)


def parity_alternation_violations(roots: Sequence) -> list[int]:
    """1-based indices j where modes j and j+1 share a parity."""
    return [j for j in range(1, len(roots)) if roots[j - 1].parity == roots[j].parity]


def monotone_bound_violations(
    eigenvalues: Sequence[float], homogeneous: Sequence[float], alpha: float
) -> list[int]:
    """1-based indices h where lambda_h(p) exceeds lambda_h(1) / alpha."""
    return [
        h
        for h, (lam, ref) in enumerate(zip(eigenvalues, homogeneous), start=1)
        if lam > ref / alpha * (1.0 + 1e-12)
    ]
