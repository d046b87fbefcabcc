"""
Unit tests for critical energies, the Duffing orbit and Hill stability.
"""

import math

import numpy as np
import pytest

from app.core.closed_form import find_eigenvalues
from app.core.density import PierLayout, homogeneous, make_two_step
from app.core.stability import (
    classify_analytic,
    critical_amplitude,
    critical_energy,
    cross_check_orientation,
    duffing_energy,
    duffing_orbit,
    duffing_period,
    duffing_profile,
    hill_monodromy,
    ratio_label,
    threshold,
)
from app.utils.error_handlers import ParameterError


def test_critical_amplitude_and_energy():
    """D(1, 3) = 2 and E(1, 3) = 6."""
    assert critical_amplitude(1.0, 3.0) == pytest.approx(2.0)
    assert critical_energy(1.0, 3.0) == pytest.approx(6.0)


def test_homogeneous_half_pier_energy():
    """For (lambda, nu) = (2.4375, 16) the threshold is 217."""
    assert critical_energy(2.4375, 16.0) == pytest.approx(217.0)


@pytest.mark.parametrize("lam,nu", [(3.0, 1.0), (1.0, 1.0), (0.0, 2.0), (-1.0, 2.0)])
def test_critical_amplitude_rejects_unordered_pair(lam, nu):
    with pytest.raises(ParameterError):
        critical_amplitude(lam, nu)


def test_threshold_picks_minimum_pair():
    """The pair with the smallest critical energy wins."""
    eigenvalues = [1.0, 3.0, 3.5, 20.0]
    report = threshold(eigenvalues, ["even", "odd", "even", "odd"], count=4, near_tie=0.0)

    assert report.argmin == 2
    assert report.threshold == pytest.approx((3.5 / 3.0 - 1.0) * 3.0 * 3.5)
    assert report.ratio_label == "3/2"
    assert report.minimizing_pair.parities == "odd/even"
    assert [row.is_minimum for row in report.pairs] == [False, True, False]


def test_threshold_reports_near_ties():
    """Pairs within the near-tie band are listed."""
    eigenvalues = [1.0, 3.0, 4.38]
    report = threshold(eigenvalues, count=3, near_tie=0.05)
    assert report.argmin == 1
    assert report.near_ties == [2]
    assert report.near_tie_label == "3/2"


def test_threshold_needs_enough_eigenvalues():
    with pytest.raises(ParameterError):
        threshold([1.0, 2.0], count=3)


def test_ratio_label():
    assert ratio_label(1) == "2/1"
    assert ratio_label(11) == "12/11"


def test_duffing_period_linear_limit():
    """With zeta = 0 the period is 2*pi/sqrt(lambda)."""
    assert duffing_period(4.0, 0.0) == pytest.approx(math.pi)


def test_duffing_period_nonlinear():
    assert duffing_period(1.0, 1.0) == pytest.approx(4.76802, rel=1e-5)


def test_duffing_profile_conserves_energy():
    """The cn orbit keeps the Duffing energy constant."""
    lam, zeta = 2.0, 1.3
    t = np.linspace(0.0, 3 * duffing_period(lam, zeta), 500)
    w, v = duffing_profile(lam, zeta, t)
    energy = duffing_energy(lam, w, v)
    np.testing.assert_allclose(energy, energy[0], rtol=1e-12)
    assert w[0] == pytest.approx(zeta)


def test_duffing_orbit_matches_profile():
    """DOP853 integration tracks the elliptic-function orbit."""
    lam, zeta = 1.0, 0.8
    t = np.linspace(0.0, 2 * duffing_period(lam, zeta), 200)
    orbit = duffing_orbit(lam, zeta, t)
    exact, _ = duffing_profile(lam, zeta, t)
    np.testing.assert_allclose(orbit.displacement, exact, atol=1e-8)
    assert orbit.energy_drift < 1e-10


def test_duffing_orbit_at_rest():
    orbit = duffing_orbit(1.0, 0.0, [0.0, 1.0])
    assert not orbit.displacement.any()


def test_hill_small_amplitude_trace():
    """At vanishing amplitude the Hill equation has constant coefficient nu."""
    lam, nu, zeta = 1.0, 2.5, 1e-4
    trace, _ = hill_monodromy(lam, nu, zeta)
    expected = 2.0 * math.cos(2.0 * math.pi * math.sqrt(nu / lam))
    assert trace == pytest.approx(expected, abs=1e-6)


@pytest.mark.slow
@pytest.mark.parametrize("scale,expected", [(0.9, "stable"), (1.5, "unstable")])
def test_hill_classification_around_critical_amplitude(scale, expected):
    """Below D(1, 3) the residual mode stays bounded, above it grows."""
    zeta = scale * critical_amplitude(1.0, 3.0)
    _, label = hill_monodromy(1.0, 3.0, zeta)
    assert label == expected


@pytest.mark.parametrize(
    "lam,nu,zeta,expected",
    [
        (1.0, 3.0, 1.0, "stable"),
        (1.0, 3.0, 2.0, "stable"),
        (1.0, 3.0, 2.5, "unstable"),
        (3.0, 1.0, 10.0, "stable"),
    ],
)
def test_classify_analytic(lam, nu, zeta, expected):
    assert classify_analytic(lam, nu, zeta) == expected


def test_classify_analytic_rejects_equal_modes():
    with pytest.raises(ParameterError):
        classify_analytic(2.0, 2.0, 1.0)


@pytest.mark.slow
def test_cross_check_orientation_has_no_contradictions():
    """Numeric and analytic classifications agree away from the boundary."""
    report = cross_check_orientation([(1.0, 3.0), (3.0, 1.0)], [0.5, 0.9, 1.5])
    assert report.total == 6
    assert not report.contradictions


@pytest.mark.slow
def test_orientation_agrees_on_computed_spectra():
    """Over 300 samples from real spectra, in both orders, the monodromy never contradicts the analytic rule."""
    rng = np.random.default_rng(20241017)
    oriented = []
    for density, a in [
        (homogeneous(), 0.5),
        (make_two_step(1 / 2, 2.0, "heavy"), 0.3),
        (make_two_step(1 / 3, 3.0, "light"), 0.7),
    ]:
        lams = [root.lam for root in find_eigenvalues(density, PierLayout(a), count=12)]
        for lam, nu in zip(lams, lams[1:]):
            oriented.extend([(lam, nu), (nu, lam)])

    agreements = marginal = 0
    contradictions = []
    for lam, nu in oriented:
        drawn = rng.uniform(0.3, 0.95) if rng.random() < 0.5 else rng.uniform(1.05, 1.7)
        report = cross_check_orientation([(lam, nu)], [0.5, 0.99, 1.01, 1.5, drawn])
        agreements += report.agreements
        marginal += report.marginal
        contradictions.extend(report.contradictions)

    assert agreements + marginal + len(contradictions) == 5 * len(oriented) >= 200
    assert contradictions == []
