"""
Unit tests for the closed-form spectrum.
"""

import math

import numpy as np
import pytest

from app.core.closed_form import (
    EigenRoot,
    TwoStepParams,
    eigenfunction_closed_form,
    find_eigenvalues,
    find_parity_roots,
    monotone_bound_violations,
    parity_alternation_violations,
)
from app.core.density import PierLayout, make_two_step
from app.utils.error_handlers import ParameterError


def test_homogeneous_odd_roots_at_half_pier(unit_density, half_layout):
    """Odd modes at a = 1/2 include sin(2x) and sin(4x)."""
    roots = find_parity_roots(unit_density, half_layout, "odd", 3)

    assert roots[0].mu == pytest.approx(2.0, abs=1e-9)
    assert roots[1].mu == pytest.approx(3.9266023120 / (math.pi / 2), abs=1e-8)
    assert roots[2].mu == pytest.approx(4.0, abs=1e-9)


def test_homogeneous_spectrum_at_half_pier(unit_density, half_layout):
    """The second eigenvalue is the odd lambda = 16, below it a single even mode."""
    roots = find_eigenvalues(unit_density, half_layout, count=4)

    assert [r.parity for r in roots[:2]] == ["even", "odd"]
    assert roots[1].lam == pytest.approx(16.0, rel=1e-10)
    assert 1.0 < roots[0].lam < 5.0
    assert all(r.case == "rho_eq_a" for r in roots)


@pytest.mark.parametrize("center", ["heavy", "light"])
@pytest.mark.parametrize("a", [0.3, 0.5, 0.7])
def test_reduced_and_gluing_agree(center, a):
    """The 4x4 reduced systems and the interface system share their roots."""
    density = make_two_step(0.5, 2.0, center)
    layout = PierLayout(a)

    gluing = find_eigenvalues(density, layout, count=8, method="gluing")
    reduced = find_eigenvalues(density, layout, count=8, method="reduced")

    np.testing.assert_allclose([r.mu for r in reduced], [r.mu for r in gluing], rtol=1e-9)
    assert [r.parity for r in reduced] == [r.parity for r in gluing]


def test_reduced_rejects_multiple_jumps(bang_bang_density, half_layout):
    with pytest.raises(ParameterError):
        find_eigenvalues(bang_bang_density, half_layout, count=4, method="reduced")


def test_unknown_method_rejected(unit_density, half_layout):
    with pytest.raises(ParameterError):
        find_eigenvalues(unit_density, half_layout, count=2, method="shooting")


def test_two_step_params_case(heavy_center):
    params = TwoStepParams.from_density(heavy_center, PierLayout(0.5))
    assert params.case == "rho_lt_a"
    assert params.tau == pytest.approx(2.0**0.25)
    assert params.sigma == pytest.approx(0.5**0.25)
    assert TwoStepParams.from_density(heavy_center, PierLayout(0.2)).case == "rho_gt_a"


def test_monotone_bound_holds(heavy_center, unit_density, half_layout):
    """lambda_h(p) never exceeds lambda_h(1) / alpha."""
    weighted = [r.lam for r in find_eigenvalues(heavy_center, half_layout, count=8)]
    reference = [r.lam for r in find_eigenvalues(unit_density, half_layout, count=8)]
    assert monotone_bound_violations(weighted, reference, 0.5) == []


def test_monotone_bound_reports_violations():
    assert monotone_bound_violations([1.0, 10.0], [1.0, 4.0], 0.5) == [2]


def test_parity_alternation_violations():
    roots = [EigenRoot(1.0, "even"), EigenRoot(2.0, "odd"), EigenRoot(3.0, "odd")]
    assert parity_alternation_violations(roots) == [2]


def test_eigenfunction_closed_form_sine(unit_density, half_layout):
    """The lambda = 16 mode is sin(2x) / sqrt(pi)."""
    root = find_parity_roots(unit_density, half_layout, "odd", 1)[0]
    shape = eigenfunction_closed_form(root, unit_density, half_layout)

    x = np.linspace(-math.pi, math.pi, 13)
    np.testing.assert_allclose(shape.evaluate(x), np.sin(2 * x) / math.sqrt(math.pi), atol=1e-9)
    assert shape.evaluate(0.0, derivative=1) > 0.0


def test_eigenfunction_boundary_conditions(heavy_center, half_layout):
    """Zeros at the hinges and piers, vanishing moment at the ends, unit weighted norm."""
    for root in find_eigenvalues(heavy_center, half_layout, count=4):
        shape = eigenfunction_closed_form(root, heavy_center, half_layout)
        scale = np.max(np.abs(shape.evaluate(np.linspace(0, math.pi, 200))))

        for point in (math.pi, half_layout.pier, -half_layout.pier):
            assert abs(shape.evaluate(point)) < 1e-8 * scale
        assert abs(shape.evaluate(math.pi, derivative=2)) < 1e-6 * scale * root.lam**0.5
        assert shape.inner(shape, heavy_center) == pytest.approx(1.0, rel=1e-10)
