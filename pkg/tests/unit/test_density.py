"""
Unit tests for admissible densities and pier layouts.
"""

import math

import numpy as np
import pytest

from app.core.density import (
    Density,
    PierLayout,
    constant_density,
    from_indicator,
    heavy_fraction,
    make_two_step,
    two_step_rho,
)
from app.utils.error_handlers import DensityError, ParameterError


@pytest.mark.parametrize("a", [0.0, 1.0, -0.2, 1.2, math.nan])
def test_pier_layout_rejects_out_of_range(a):
    """Pier parameter must lie strictly inside (0, 1)."""
    with pytest.raises(ParameterError):
        PierLayout(a)


def test_pier_abscissa(half_layout):
    assert half_layout.pier == pytest.approx(math.pi / 2)


def test_homogeneous_density(unit_density):
    """The unit density has no jumps and mass 2*pi."""
    assert unit_density.is_homogeneous
    assert unit_density.jump_count == 0
    assert unit_density.mass() == pytest.approx(2 * math.pi, abs=1e-12)


@pytest.mark.parametrize(
    "alpha,beta",
    [(5 / 6, 3 / 2), (2 / 3, 2.0), (1 / 2, 5 / 2), (1 / 3, 3.0)],
)
@pytest.mark.parametrize("center", ["heavy", "light"])
def test_two_step_mass_and_jump(alpha, beta, center):
    """Two-step densities carry mass 2*pi with a single jump at rho*pi."""
    density = make_two_step(alpha, beta, center)

    assert density.mass() == pytest.approx(2 * math.pi, abs=1e-12)
    assert density.jump_count == 1
    assert density.breakpoints[0] == pytest.approx(two_step_rho(alpha, beta, center) * math.pi)
    expected_center = beta if center == "heavy" else alpha
    assert density.evaluate(0.0) == expected_center


def test_two_step_rho_values():
    """rho for the heavy-center density equals the heavy fraction."""
    assert two_step_rho(0.5, 2.0, "heavy") == pytest.approx(1 / 3)
    assert two_step_rho(0.5, 2.0, "light") == pytest.approx(2 / 3)
    assert heavy_fraction(0.5, 2.0) == pytest.approx(1 / 3)


def test_two_step_rejects_unknown_center():
    with pytest.raises(ParameterError):
        two_step_rho(0.5, 2.0, "middle")


def test_two_step_rejects_homogeneous_bounds():
    with pytest.raises(DensityError):
        make_two_step(1.0, 1.0, "heavy")


def test_evaluate_is_even(heavy_center):
    x = np.linspace(0.0, math.pi, 11)
    np.testing.assert_array_equal(heavy_center.evaluate(x), heavy_center.evaluate(-x))


def test_heavy_set(heavy_center):
    [(lo, hi)] = heavy_center.heavy_set()
    assert lo == 0.0
    assert hi == pytest.approx(math.pi / 3)


def test_from_indicator_builds_bang_bang(bang_bang_density):
    """Two heavy intervals give three jumps and unit mean density."""
    assert bang_bang_density.is_bang_bang
    assert bang_bang_density.jump_count == 3
    assert bang_bang_density.mass() == pytest.approx(2 * math.pi, abs=1e-12)
    assert bang_bang_density.values[0] == 2.0


def test_from_indicator_merges_touching_intervals():
    """Adjacent heavy intervals collapse into one."""
    heavy = math.pi / 3
    density = from_indicator(0.5, 2.0, [(0.0, heavy / 2), (heavy / 2, heavy)])
    assert density.jump_count == 1


@pytest.mark.parametrize("shortfall", [5e-10, 9e-10])
def test_from_indicator_snaps_interval_ending_near_pi(shortfall):
    """A heavy interval reaching pi - 1e-10 absorbs a residual within tolerance."""
    hi = math.pi - 1e-10
    lo = hi - (heavy_fraction(0.5, 2.0) * math.pi - shortfall)
    density = from_indicator(0.5, 2.0, [(lo, hi)])

    assert density.mass() == pytest.approx(2 * math.pi, abs=1e-12)
    assert all(0.0 < b < math.pi for b in density.breakpoints)
    assert density.values[-1] == 2.0
    assert density.evaluate(math.pi) == 2.0


def test_from_indicator_snap_keeps_intervals_apart():
    """Growing an interval stops short of its neighbour across a 2e-9 gap."""
    heavy = heavy_fraction(0.5, 2.0) * math.pi
    split = math.pi - heavy / 2
    first = (split - 2e-9 - heavy / 2 + 9e-10, split - 2e-9)
    second = (split, math.pi)
    density = from_indicator(0.5, 2.0, [first, second])

    assert density.mass() == pytest.approx(2 * math.pi, abs=1e-12)
    assert density.jump_count == 3
    assert density.breakpoints[1] == pytest.approx(split - 2e-9, abs=1e-15)
    assert density.breakpoints[2] - density.breakpoints[1] > 1e-9


def test_from_indicator_rejects_wrong_length():
    with pytest.raises(DensityError, match="Heavy set length"):
        from_indicator(0.5, 2.0, [(0.0, 1.5)])


def test_density_rejects_wrong_mass():
    with pytest.raises(DensityError, match="Mass"):
        Density(alpha=0.5, beta=2.0, breakpoints=(1.0,), values=(2.0, 0.5))


def test_density_rejects_unsorted_breakpoints():
    with pytest.raises(DensityError, match="strictly increasing"):
        Density(alpha=0.5, beta=2.0, breakpoints=(2.0, 1.0), values=(2.0, 0.5, 2.0))


def test_density_rejects_intermediate_values_outside_validation_mode():
    with pytest.raises(DensityError, match="alpha or beta"):
        Density(alpha=0.5, beta=2.0, breakpoints=(math.pi / 2,), values=(1.5, 0.5))


def test_validation_mode_accepts_intermediate_values():
    """Intermediate values are admissible when mass is right and validation mode is on."""
    density = Density(
        alpha=0.5, beta=2.0, breakpoints=(math.pi / 2,), values=(1.5, 0.5), validation_mode=True
    )
    assert not density.is_bang_bang


def test_record_round_trip(heavy_center):
    restored = Density.from_record(heavy_center.to_record())
    assert restored == heavy_center


def test_constant_density_in_material_class():
    density = constant_density(0.5, 2.0)
    assert density.is_constant
    assert not density.is_homogeneous
