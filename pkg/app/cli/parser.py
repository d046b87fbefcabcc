"""Argument parser for the beam-stability command line."""

import argparse

from app.schemas.run import TABLE_CHOICES
from app.utils.constants import MODE_HOMOGENEOUS, MODE_OPTIMIZE, MODE_TWO_STEP_HEAVY, MODE_TWO_STEP_LIGHT

DENSITY_CHOICES = (MODE_HOMOGENEOUS, MODE_TWO_STEP_HEAVY, MODE_TWO_STEP_LIGHT, MODE_OPTIMIZE)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="key = value file; its values override flags")
    parser.add_argument("--output", "-o", help="Output directory")
    parser.add_argument("--log-level", choices=("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"))


def _add_beam(parser: argparse.ArgumentParser, grid: bool = False) -> None:
    parser.add_argument("--alpha", help="Lower density bound, e.g. 1/3")
    parser.add_argument("--beta", help="Upper density bound, e.g. 3")
    parser.add_argument("--a", help="Pier parameter in (0, 1)")
    if grid:
        parser.add_argument("--a-grid", dest="a_grid", help="Pier positions, space or comma separated")
    parser.add_argument("--density", choices=DENSITY_CHOICES)
    parser.add_argument(
        "--n", type=int, help="Galerkin basis functions per parity (>= 12); selects Galerkin under --solver auto"
    )
    parser.add_argument("--iterations", type=int, help="Optimizer iterations per seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="beam-stability",
        description="Spectra, energy thresholds and optimal densities of hinged beams with intermediate piers.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    spectrum = sub.add_parser("spectrum", help="Eigenvalues and eigenvalue curves")
    _add_common(spectrum)
    _add_beam(spectrum, grid=True)
    spectrum.add_argument("--solver", choices=("auto", "exact", "galerkin"))
    spectrum.add_argument("--count", type=int, help="Number of eigenvalues")
    spectrum.add_argument("--determinant", choices=("gluing", "reduced"))

    thresh = sub.add_parser("threshold", help="Critical energy threshold")
    _add_common(thresh)
    _add_beam(thresh, grid=True)
    thresh.add_argument("--solver", choices=("auto", "exact", "galerkin"))
    thresh.add_argument("--count", type=int, help="Modes entering the minimum")
    thresh.add_argument("--workers", type=int, help="Parallel sweep workers")

    reproduce = sub.add_parser("reproduce", help="Regenerate a published table")
    _add_common(reproduce)
    reproduce.add_argument("table", nargs="?", choices=TABLE_CHOICES)
    reproduce.add_argument("--tolerance", type=float, help="Relative threshold tolerance")
    reproduce.add_argument("--workers", type=int, help="Parallel sweep workers")
    reproduce.add_argument("--backend", choices=("local", "celery"))
    reproduce.add_argument("--iterations", type=int, help="Optimizer iterations per seed")

    sim = sub.add_parser("simulate", help="Modal time integration")
    _add_common(sim)
    _add_beam(sim)
    sim.add_argument("--pair", type=int, help="Prevailing mode j of the pair (j, j+1)")
    sim.add_argument("--modes", type=int, help="Active modes; omit for the two-mode system")
    sim.add_argument("--zeta-rel", dest="zeta_rel", type=float, help="Prevailing amplitude over D")
    sim.add_argument("--z0-rel", dest="z0_rel", type=float, help="Residual amplitude over zeta")
    sim.add_argument("--periods", type=float, help="Prevailing-mode periods")
    sim.add_argument("--t-end", dest="t_end", type=float)
    sim.add_argument("--dt", type=float, help="Time step (> 0)")
    sim.add_argument("--drift-tolerance", dest="drift_tolerance", type=float)

    prof = sub.add_parser("profile", help="g(p, x) samples for a mode pair")
    _add_common(prof)
    _add_beam(prof)
    prof.add_argument("--pair", type=int, help="Pair index k of (k, k+1), default the minimizing pair")
    prof.add_argument("--samples", type=int)

    return parser
