"""End-to-end checks against the published case studies.

Randomized property suites (fixed-point stability in the three-point regime,
invariance of M, finite-difference and grid-scan oracles) live in the module
test files.
"""
import math

import numpy as np
import pytest

from plankton_dynamics.analysis.bifurcation import CurveStability, NeimarkSackerAnalyzer, transversality
from plankton_dynamics.analysis.fixed_points import find_positive_fixed_points, interior_fixed_point_h1
from plankton_dynamics.analysis.model import ModelParams, PlanktonState
from plankton_dynamics.simulation.dynamics import OrbitSpec, bifurcation_sweep, iterate_orbit

START = PlanktonState(u=0.2, v=1.1)


@pytest.fixture(scope='module')
def holling2_report():
    return NeimarkSackerAnalyzer().analyze(2.0, 0.5, 2.0, 1)


@pytest.fixture(scope='module')
def holling3_report():
    return NeimarkSackerAnalyzer().analyze(2.0, 0.5, 0.25, 2)


class TestHollingIICase:
    def test_bifurcation_point(self, holling2_report):
        point = holling2_report.ns_point
        assert point.theta0 == pytest.approx(1.2012, abs=1e-3)
        assert point.u_tilde == pytest.approx(0.3796, abs=1e-3)
        lam1, lam2 = (e.value for e in holling2_report.eigenvalues)
        assert (lam1.real, lam1.imag) == pytest.approx((0.81, -0.5864), abs=1e-3)
        assert (lam2.real, lam2.imag) == pytest.approx((0.81, 0.5864), abs=1e-3)
        assert holling2_report.d_modulus_dtheta == pytest.approx(-0.10496, abs=2e-4)

    def test_normal_form(self, holling2_report):
        expected = {'L20': 0.0225 + 0.1809j, 'L11': -0.1587 - 0.1012j, 'L02': -0.4197 + 0.0142j, 'L21': 0.0209 - 0.049j}
        for name, value in expected.items():
            got = getattr(holling2_report, name).value
            assert (got.real, got.imag) == pytest.approx((value.real, value.imag), abs=2e-3), name
        assert holling2_report.L_quantity == pytest.approx(-0.132, abs=5e-3)
        assert holling2_report.curve_stability is CurveStability.ATTRACTING


class TestHollingIIICase:
    def test_bifurcation_point(self, holling3_report):
        point = holling3_report.ns_point
        assert point.theta0 == pytest.approx(1.035, rel=5e-3)
        assert point.u_tilde == pytest.approx(0.292, abs=5e-3)
        lam1, _ = (e.value for e in holling3_report.eigenvalues)
        assert (lam1.real, lam1.imag) == pytest.approx((0.854, -0.520), abs=5e-3)

    def test_attracting_curve(self, holling3_report):
        assert holling3_report.L_quantity < 0.0
        assert holling3_report.L_quantity == pytest.approx(-0.163, abs=1e-2)
        assert holling3_report.curve_stability is CurveStability.ATTRACTING

    def test_transversality_matches_finite_difference(self, holling3_report):
        point = holling3_report.ns_point
        step = 1e-6
        moduli = []
        for theta in (point.theta0 + step, point.theta0 - step):
            params = ModelParams(beta=2.0, r=0.5, theta=theta, c=0.25, h=2)
            (record,) = [rec for rec in find_positive_fixed_points(params) if abs(rec.point.u - point.u_tilde) < 1e-3]
            moduli.append(math.sqrt(record.char_q))
        assert transversality(point) == pytest.approx((moduli[0] - moduli[1]) / (2 * step), abs=1e-6)


class TestCaptionFixedPoints:
    def test_holling_ii(self):
        record = interior_fixed_point_h1(ModelParams(beta=2.0, r=0.5, theta=1.201, c=2.0, h=1))
        assert record.point.u == pytest.approx(0.37957, abs=5e-4)
        assert record.char_q == pytest.approx(1.00003, abs=5e-4)

    def test_holling_iii(self):
        records = find_positive_fixed_points(ModelParams(beta=2.0, r=0.5, theta=1.03, c=0.25, h=2))
        lower = records[0]
        assert lower.branch == 'E-'
        assert lower.point.u == pytest.approx(0.2934, abs=5e-4)
        assert lower.char_q == pytest.approx(1.00115, abs=5e-4)


class TestOrbits:
    def test_attracting_regime(self):
        params = ModelParams(beta=2.0, r=0.5, theta=1.205, c=2.0, h=1)
        result = iterate_orbit(params, OrbitSpec(initial=START, steps=100_000, transient=99_999))
        assert (result.u[-1], result.v[-1]) == pytest.approx((0.3801, 0.6199), abs=5e-3)

    def test_convergence_to_boundary_point(self):
        params = ModelParams(beta=0.5, r=0.6, theta=0.5, c=1.0, h=1)
        result = iterate_orbit(params, OrbitSpec(initial=PlanktonState(u=0.5, v=0.5), steps=10_000, transient=9_999))
        assert math.hypot(result.u[-1] - 1.0, result.v[-1]) < 1e-6

    def test_zooplankton_axis(self):
        params = ModelParams(beta=2.0, r=0.5, theta=1.2, c=2.0, h=1)
        result = iterate_orbit(params, OrbitSpec(initial=PlanktonState(u=0.0, v=1.0), steps=20, transient=0))
        assert result.u == [0.0] * 20
        np.testing.assert_allclose(result.v, 0.5 ** np.arange(1, 21), rtol=1e-12)


class TestBifurcationDiagrams:
    def test_holling_ii_sweep(self, holling2_report):
        theta0 = holling2_report.ns_point.theta0
        spec = OrbitSpec(initial=START, steps=30_000, transient=29_000)
        result = bifurcation_sweep(ModelParams(beta=2.0, r=0.5, theta=1.0, c=2.0, h=1), 0.1, 5.0, 50, spec, keep=200)
        diameters = result.diameters()
        checked = 0
        for theta, diameter, mle, diverged in zip(result.theta_grid, diameters, result.mle, result.diverged):
            # the interior point meets (1, 0) at theta = 4.5
            if theta <= theta0 + 0.02 or 4.3 < theta < 4.7:
                continue
            assert not diverged, theta
            assert diameter < 1e-6, theta
            assert mle < 0.0, theta
            checked += 1
        assert checked > 30

    def test_holling_ii_invariant_curve(self):
        spec = OrbitSpec(initial=START, steps=30_000, transient=29_000)
        result = bifurcation_sweep(ModelParams(beta=2.0, r=0.5, theta=1.0, c=2.0, h=1), 1.12, 1.5, 2, spec, keep=200)
        assert result.theta_grid == [1.12, 1.5]
        curve, collapsed = result.diameters()
        assert curve > 1e-2
        assert abs(result.mle[0]) < 0.01
        assert collapsed < 1e-6

    def test_holling_iii_sweep(self):
        spec = OrbitSpec(initial=START, steps=30_000, transient=29_000)
        result = bifurcation_sweep(ModelParams(beta=2.0, r=0.5, theta=1.0, c=0.25, h=2), 1.01, 1.5, 2, spec, keep=200)
        curve, collapsed = result.diameters()
        assert curve > 1e-2
        assert collapsed < 1e-6
