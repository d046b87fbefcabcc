# File: app/core/optimizer.py

"""
Density optimization by level-set rebalancing, and the sweeps built on it.

Each step solves the weighted spectrum of the current density, finds the
pair (lambda_k, lambda_{k+1}) realizing the threshold, and puts the heavy
material where g = (lambda_{k+1}/lambda_k)(e_k**2 - e_{k+1}**2) is largest,
on a set whose measure preserves the mass.
"""

import logging
import math
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from app.config.settings import OptimizerSettings, get_settings
from app.core.closed_form import find_eigenvalues
from app.core.density import (
    Density,
    PierLayout,
    constant_density,
    from_indicator,
    heavy_fraction,
    homogeneous,
    make_two_step,
    two_step_rho,
)
from app.core.galerkin import WeightedSpectrum, eigenfunction_eval, solve_weighted_spectrum
from app.core.stability import StabilityReport, threshold
from app.schemas.records import MaterialCell, SweepCell, SweepRow
from app.utils.constants import (
    CENTER_HEAVY,
    CENTER_LIGHT,
    DEFAULT_MODE_COUNT,
    ENERGY_SCALE,
    HALF_SPAN,
    INDICATOR_LENGTH_TOLERANCE,
    LEVEL_MAX_BISECTIONS,
    MODE_HOMOGENEOUS,
    MODE_OPTIMIZE,
    MODE_TWO_STEP_HEAVY,
    MODE_TWO_STEP_LIGHT,
    PARITY_EVEN,
    PARITY_ODD,
    PROFILE_BOUNDARY_TOLERANCE,
    SEED_CONSTANT,
    SEED_HEAVY,
    SEED_LIGHT,
)
from app.utils.error_handlers import BeamStabilityError, NumericalError, ParameterError, PlateauError
from app.utils.validators import validate_material_bounds

logger = logging.getLogger(__name__)

SWEEP_MODES = (MODE_HOMOGENEOUS, MODE_TWO_STEP_HEAVY, MODE_TWO_STEP_LIGHT, MODE_OPTIMIZE)


@dataclass(frozen=True, eq=False)
class GProfile:
    """Samples of g on the half-beam for the pair (k, k+1)."""

    x: np.ndarray
    values: np.ndarray
    pair_index: int
    parities: tuple[str, str]
    a: float

    def at(self, point: float) -> float:
        return float(np.interp(point, self.x, self.values))


def g_profile(spectrum: WeightedSpectrum, pair_index: int, samples: int | None = None) -> GProfile:
    """
    Sample g(p, x) = (lambda_{k+1}/lambda_k) (e_k**2 - e_{k+1}**2) on [0, pi].

    The grid has `samples` uniform points plus the pier abscissa.
    """
    samples = samples or get_settings().optimizer.profile_samples
    k = pair_index
    if not 1 <= k < spectrum.count:
        raise ParameterError(f"Pair index must be between 1 and {spectrum.count - 1}, got {k}")
    x = np.union1d(np.linspace(0.0, HALF_SPAN, samples), [spectrum.layout.pier])
    lower = eigenfunction_eval(spectrum, k, x)
    upper = eigenfunction_eval(spectrum, k + 1, x)
    ratio = spectrum.eigenvalues[k] / spectrum.eigenvalues[k - 1]
    return GProfile(
        x=x,
        values=ratio * (lower**2 - upper**2),
        pair_index=k,
        parities=(spectrum.parities[k - 1], spectrum.parities[k]),
        a=spectrum.layout.a,
    )


def profile_structure_problems(profile: GProfile, tolerance: float = PROFILE_BOUNDARY_TOLERANCE) -> list[str]:
    """Describe every violation of the boundary zeros and of the sign rule at x = 0."""
    problems = []
    for name, point in (("pier", profile.a * math.pi), ("end", HALF_SPAN)):
        value = profile.at(point)
        if abs(value) > tolerance:
            problems.append(f"g({name})={value:.3e}")
    center = profile.values[0]
    if profile.parities == (PARITY_EVEN, PARITY_ODD) and not center > 0.0:
        problems.append(f"g(0)={center:.3e} should be positive for an even/odd pair")
    if profile.parities == (PARITY_ODD, PARITY_EVEN) and not center < 0.0:
        problems.append(f"g(0)={center:.3e} should be negative for an odd/even pair")
    return problems


def _superlevel(x: np.ndarray, g: np.ndarray, level: float) -> tuple[np.ndarray, np.ndarray]:
    """Start and end points of {g >= level} for the piecewise-linear interpolant of g."""
    above = g >= level
    seg = np.nonzero(above[:-1] != above[1:])[0]
    cross = x[seg] + (g[seg] - level) / (g[seg] - g[seg + 1]) * (x[seg + 1] - x[seg])
    rising = ~above[seg]
    starts = cross[rising]
    ends = cross[~rising]
    if above[0]:
        starts = np.concatenate(([x[0]], starts))
    if above[-1]:
        ends = np.concatenate((ends, [x[-1]]))
    return starts, ends


def superlevel_measure(x: np.ndarray, g: np.ndarray, level: float) -> float:
    starts, ends = _superlevel(x, g, level)
    return math.fsum(ends - starts)


def level_threshold(
    profile: GProfile, alpha: float, beta: float, tolerance: float | None = None
) -> tuple[float, list[tuple[float, float]]]:
    """
    Find t with |{g >= t}| = pi (1 - alpha) / (beta - alpha) on the half-beam.

    Returns:
        The level t and the superlevel set as sorted intervals.

    Raises:
        PlateauError: g is flat at the critical level, so no level matches the measure.
    """
    tolerance = tolerance or get_settings().optimizer.level_tolerance
    target = heavy_fraction(alpha, beta) * math.pi
    x, g = profile.x, profile.values
    lo, hi = float(np.min(g)), float(np.max(g))
    if target >= HALF_SPAN:
        return lo, [(0.0, HALF_SPAN)]

    level = lo
    for _ in range(LEVEL_MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        measure = superlevel_measure(x, g, mid)
        if abs(measure - target) <= tolerance:
            level = mid
            break
        if measure > target:
            lo = mid
        else:
            hi = mid
        if not lo < 0.5 * (lo + hi) < hi:
            gap = superlevel_measure(x, g, lo) - superlevel_measure(x, g, hi)
            if gap > INDICATOR_LENGTH_TOLERANCE:
                raise PlateauError(
                    f"Level set of g at t={lo:.12g} has measure {gap:.3e} for pair {profile.pair_index}"
                )
            level = lo
            break
    else:
        level = lo

    starts, ends = _superlevel(x, g, level)
    return level, [(float(s), float(e)) for s, e in zip(starts, ends)]


def spectrum_threshold(
    density: Density, layout: PierLayout, exact: bool = False, count: int = DEFAULT_MODE_COUNT
) -> StabilityReport:
    """Threshold of a density from the closed-form (exact=True) or Galerkin spectrum."""
    if exact:
        roots = find_eigenvalues(density, layout, count)
        return threshold([r.lam for r in roots], [r.parity for r in roots], count)
    spectrum = solve_weighted_spectrum(density, layout, count=count)
    return threshold(spectrum.eigenvalues, spectrum.parities, count)


def _rebalance(
    spectrum: WeightedSpectrum, report: StabilityReport, alpha: float, beta: float
) -> tuple[Density, GProfile]:
    profile = g_profile(spectrum, report.argmin)
    problems = profile_structure_problems(profile)
    if problems:
        logger.warning(f"g profile structure at a={profile.a}: {'; '.join(problems)}")
    _, heavy_set = level_threshold(profile, alpha, beta)
    return from_indicator(alpha, beta, heavy_set), profile


def iterate_density(density: Density, layout: PierLayout, alpha: float, beta: float) -> Density:
    """One rebalancing step: spectrum, threshold, g profile, level set, new bang-bang density."""
    spectrum = solve_weighted_spectrum(density, layout)
    report = threshold(spectrum.eigenvalues, spectrum.parities)
    nxt, _ = _rebalance(spectrum, report, alpha, beta)
    return nxt


def same_density(first: Density, second: Density, tolerance: float) -> bool:
    if first.values != second.values or first.jump_count != second.jump_count:
        return False
    return all(abs(b1 - b2) <= tolerance for b1, b2 in zip(first.breakpoints, second.breakpoints))


@dataclass(frozen=True)
class IterateRecord:
    seed: str
    iteration: int
    density: Density
    energy: float
    pair_index: int
    ratio_label: str


@dataclass
class OptimizationResult:
    """Best density of the pool of iterates, with the full trace and any failures."""

    density: Density
    energy: float
    ratio_label: str
    pair_index: int
    seed: str
    trace: list[IterateRecord] = field(default_factory=list)
    failures: list[tuple[str, int, str]] = field(default_factory=list)

    @property
    def jump_count(self) -> int:
        return self.density.jump_count


def seed_densities(alpha: float, beta: float) -> list[tuple[str, Density]]:
    """Constant density p = 1 and both two-step densities."""
    if alpha == 1.0 and beta == 1.0:
        return [(SEED_CONSTANT, homogeneous())]
    return [
        (SEED_CONSTANT, constant_density(alpha, beta)),
        (SEED_HEAVY, make_two_step(alpha, beta, CENTER_HEAVY)),
        (SEED_LIGHT, make_two_step(alpha, beta, CENTER_LIGHT)),
    ]


def optimize_density(
    layout: PierLayout,
    alpha: float,
    beta: float,
    settings: OptimizerSettings | None = None,
    seeds: Sequence[tuple[str, Density]] | None = None,
) -> OptimizationResult:
    """
    Run the rebalancing iteration from every seed and keep the best iterate.

    Seeds and all their iterates form the pool; the first iterate reaching
    the largest threshold wins. An iterate that fails ends its seed's run
    and is recorded in `failures`.

    Raises:
        NumericalError: Every seed failed before producing an iterate.
    """
    settings = settings or get_settings().optimizer
    validate_material_bounds(alpha, beta)
    seeds = seeds if seeds is not None else seed_densities(alpha, beta)
    homogeneous_pair = alpha == 1.0 and beta == 1.0

    trace: list[IterateRecord] = []
    failures: list[tuple[str, int, str]] = []
    for name, density in seeds:
        for i in range(settings.iterations + 1):
            try:
                spectrum = solve_weighted_spectrum(density, layout)
                report = threshold(spectrum.eigenvalues, spectrum.parities)
            except BeamStabilityError as e:
                failures.append((name, i, str(e)))
                logger.warning(f"Seed {name} failed at iteration {i}: {e}")
                break
            trace.append(IterateRecord(name, i, density, report.threshold, report.argmin, report.ratio_label))
            logger.debug(f"a={layout.a} seed={name} i={i} E={report.threshold:.6g} R={report.ratio_label}")
            if i == settings.iterations or homogeneous_pair:
                break
            try:
                nxt, _ = _rebalance(spectrum, report, alpha, beta)
            except BeamStabilityError as e:
                failures.append((name, i, str(e)))
                logger.warning(f"Rebalancing seed {name} failed at iteration {i}: {e}")
                break
            if settings.early_exit and same_density(density, nxt, settings.fixed_point_tolerance):
                logger.debug(f"Seed {name} reached a fixed point at iteration {i}")
                break
            density = nxt

    if not trace:
        raise NumericalError(f"Every seed failed for a={layout.a}, alpha={alpha}, beta={beta}: {failures}")
    best = trace[0]
    for record in trace[1:]:
        if record.energy > best.energy:
            best = record
    logger.info(
        f"Optimized a={layout.a} alpha={alpha:.6g} beta={beta:.6g}: E*={best.energy:.6g} "
        f"N*={best.density.jump_count} R={best.ratio_label} ({best.seed}, i={best.iteration})"
    )
    return OptimizationResult(
        density=best.density,
        energy=best.energy,
        ratio_label=best.ratio_label,
        pair_index=best.pair_index,
        seed=best.seed,
        trace=trace,
        failures=failures,
    )


def _breakpoint_text(density: Density) -> str:
    return " ".join(f"{b:.12g}" for b in density.breakpoints)


def evaluate_cell(cell: SweepCell) -> SweepRow:
    """
    Best threshold of one sweep cell; errors end up in the row status.

    Two-step and homogeneous cells use the exact spectrum, optimize cells
    the Galerkin spectrum.
    """
    row = SweepRow(alpha=cell.alpha, beta=cell.beta, a=cell.a, mode=cell.mode)
    try:
        layout = PierLayout(cell.a)
        rho = None
        if cell.mode == MODE_OPTIMIZE:
            result = optimize_density(layout, cell.alpha, cell.beta)
            density, energy, label = result.density, result.energy, result.ratio_label
            near = ""
        else:
            if cell.mode == MODE_HOMOGENEOUS:
                density = homogeneous()
            elif cell.mode in (MODE_TWO_STEP_HEAVY, MODE_TWO_STEP_LIGHT):
                center = CENTER_HEAVY if cell.mode == MODE_TWO_STEP_HEAVY else CENTER_LIGHT
                density = make_two_step(cell.alpha, cell.beta, center)
                rho = two_step_rho(cell.alpha, cell.beta, center)
            else:
                raise ParameterError(f"Unknown sweep mode {cell.mode!r}")
            report = spectrum_threshold(density, layout, exact=True)
            energy, label, near = report.threshold, report.ratio_label, report.near_tie_label
    except BeamStabilityError as e:
        logger.error(f"Sweep cell {cell.key} failed: {e}")
        return row.model_copy(update={"status": f"{type(e).__name__}: {e}"})

    return row.model_copy(
        update={
            "energy": energy,
            "energy_scaled": energy / ENERGY_SCALE,
            "ratio_label": label,
            "jump_count": density.jump_count,
            "rho": rho,
            "breakpoints": _breakpoint_text(density),
            "center_value": density.values[0],
            "near_tie": near,
        }
    )


Runner = Callable[[list[SweepCell]], list[SweepRow]]


def run_sequential(cells: list[SweepCell]) -> list[SweepRow]:
    return [evaluate_cell(cell) for cell in cells]


def best_row(rows: Iterable[SweepRow]) -> SweepRow | None:
    """Largest threshold; ties go to the smaller a."""
    best = None
    for row in sorted(rows, key=lambda r: r.a):
        if row.energy is None:
            continue
        if best is None or row.energy > best.energy:
            best = row
    return best


@dataclass
class PierSweep:
    rows: list[SweepRow]
    best: SweepRow | None

    @property
    def a_opt(self) -> float | None:
        return self.best.a if self.best else None


def sweep_pier(
    alpha: float,
    beta: float,
    a_values: Sequence[float],
    mode: str = MODE_OPTIMIZE,
    runner: Runner | None = None,
) -> PierSweep:
    """Evaluate every pier position and pick a_opt."""
    if not a_values:
        raise ParameterError("Pier grid must not be empty")
    cells = [SweepCell(alpha=alpha, beta=beta, a=a, mode=mode) for a in sorted(set(a_values))]
    rows = sorted((runner or run_sequential)(cells), key=lambda r: r.a)
    return PierSweep(rows=rows, best=best_row(rows))


@dataclass
class MaterialSweep:
    rows: list[SweepRow]
    cells: list[MaterialCell]
    best: MaterialCell | None


def sweep_materials(
    alphas: Sequence[float],
    betas: Sequence[float],
    a_values: Sequence[float],
    mode: str = MODE_OPTIMIZE,
    runner: Runner | None = None,
) -> MaterialSweep:
    """
    Pier sweeps over every material pair, run as one batch of cells.

    Returns:
        All rows sorted by (alpha, beta, a), the optimum per pair, and the
        overall optimum.
    """
    cells = [
        SweepCell(alpha=alpha, beta=beta, a=a, mode=mode)
        for alpha in alphas
        for beta in betas
        for a in sorted(set(a_values))
    ]
    rows = sorted((runner or run_sequential)(cells), key=lambda r: (r.alpha, r.beta, r.a))

    table = []
    for alpha in alphas:
        for beta in betas:
            pair_rows = [r for r in rows if r.alpha == alpha and r.beta == beta]
            best = best_row(pair_rows)
            failed = [r for r in pair_rows if r.status != "ok"]
            status = "ok" if not failed else f"{len(failed)} failed cells"
            if best is None:
                table.append(MaterialCell(alpha=alpha, beta=beta, mode=mode, status=status))
                continue
            table.append(
                MaterialCell(
                    alpha=alpha,
                    beta=beta,
                    mode=mode,
                    a_opt=best.a,
                    energy=best.energy,
                    energy_scaled=best.energy_scaled,
                    ratio_label=best.ratio_label,
                    jump_count=best.jump_count,
                    rho=best.rho,
                    breakpoints=best.breakpoints,
                    status=status,
                )
            )

    scored = [c for c in table if c.energy is not None]
    overall = max(scored, key=lambda c: c.energy) if scored else None
    if overall:
        logger.info(
            f"Overall optimum ({mode}): alpha={overall.alpha:.6g} beta={overall.beta:.6g} "
            f"a={overall.a_opt} E*={overall.energy:.6g}"
        )
    return MaterialSweep(rows=rows, cells=table, best=overall)
