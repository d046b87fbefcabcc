# File: app/core/__init__.py

from .closed_form import EigenRoot, eigenfunction_closed_form, find_eigenvalues
from .density import Density, PierLayout, from_indicator, homogeneous, make_two_step
from .evolution import ModalState, bimodal_experiment, project_initial, simulate
from .galerkin import WeightedSpectrum, eigenfunction_eval, solve_weighted_spectrum
from .modes import ModeShape
from .optimizer import optimize_density, sweep_materials, sweep_pier
from .stability import (
    StabilityReport,
    classify_analytic,
    critical_amplitude,
    critical_energy,
    hill_monodromy,
    threshold,
)

__all__ = [
    "Density",
    "PierLayout",
    "homogeneous",
    "make_two_step",
    "from_indicator",
    "ModeShape",
    "EigenRoot",
    "find_eigenvalues",
    "eigenfunction_closed_form",
    "WeightedSpectrum",
    "solve_weighted_spectrum",
    "eigenfunction_eval",
    "StabilityReport",
    "critical_amplitude",
    "critical_energy",
    "threshold",
    "hill_monodromy",
    "classify_analytic",
    "optimize_density",
    "sweep_pier",
    "sweep_materials",
    "ModalState",
    "project_initial",
    "simulate",
    "bimodal_experiment",
]
