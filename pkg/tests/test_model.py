import numpy as np
import pytest
from pydantic import ValidationError

from plankton_dynamics.analysis.model import (
    BaseParams,
    ModelParams,
    PlanktonState,
    characteristic_q,
    evaluate_map,
    holling,
    jacobian,
    map_components,
    psi,
    psi2_derivative_numerator,
    psi_unchecked,
)
from plankton_dynamics.utils.errors import InvalidParametersError


def _random_params(rng, h=None):
    return ModelParams(
        beta=rng.uniform(0.1, 4.0),
        r=rng.uniform(0.05, 1.5),
        theta=rng.uniform(0.05, 5.0),
        c=rng.uniform(0.05, 3.0),
        h=int(h or rng.integers(1, 3)),
    )


class TestParams:
    def test_rejects_nonpositive_values(self):
        with pytest.raises(ValidationError):
            ModelParams(beta=-1.0, r=0.5, theta=1.0, c=2.0, h=1)
        with pytest.raises(ValidationError):
            ModelParams(beta=2.0, r=0.0, theta=1.0, c=2.0, h=1)

    def test_rejects_other_holling_exponents(self):
        with pytest.raises(ValidationError):
            ModelParams(beta=2.0, r=0.5, theta=1.0, c=2.0, h=3)

    def test_rejects_nan(self):
        with pytest.raises(ValidationError):
            ModelParams(beta=float('nan'), r=0.5, theta=1.0, c=2.0, h=1)

    def test_with_theta_and_base_round_trip(self, holling2_base):
        params = holling2_base.with_theta(1.2)
        assert params.theta == 1.2
        assert params.base() == holling2_base

    def test_state_rejects_negative_but_unchecked_allows(self):
        with pytest.raises(ValidationError):
            PlanktonState(u=-0.1, v=0.5)
        s = PlanktonState.unchecked(-0.1, 0.5)
        assert not s.is_nonnegative
        assert s.as_tuple() == (-0.1, 0.5)


class TestMap:
    def test_boundary_points_are_fixed(self, rng):
        for _ in range(50):
            params = _random_params(rng)
            assert evaluate_map(params, PlanktonState(u=0.0, v=0.0)).as_tuple() == (0.0, 0.0)
            assert evaluate_map(params, PlanktonState(u=1.0, v=0.0)).as_tuple() == (1.0, 0.0)

    def test_interior_point_from_psi_is_fixed(self, rng):
        for _ in range(100):
            base = BaseParams(beta=rng.uniform(0.6, 4.0), r=rng.uniform(0.05, 0.5), c=rng.uniform(0.05, 3.0),
                              h=int(rng.integers(1, 3)))
            u = rng.uniform(base.r / base.beta + 0.01, 0.99)
            params = base.with_theta(psi(base, u))
            image = evaluate_map(params, PlanktonState(u=u, v=1.0 - u))
            assert image.u == pytest.approx(u, abs=1e-12)
            assert image.v == pytest.approx(1.0 - u, abs=1e-12)

    def test_negative_images_are_not_clamped(self, holling2_base):
        image = evaluate_map(holling2_base.with_theta(1.0), PlanktonState(u=0.5, v=3.0))
        assert image.u == pytest.approx(-0.75)
        assert not image.is_nonnegative

    def test_map_components_vectorizes(self, holling2_base):
        params = holling2_base.with_theta(1.2)
        u = np.array([0.1, 0.4, 0.9])
        v = np.array([0.2, 0.6, 1.0])
        un, vn = map_components(params, u, v)
        for i in range(3):
            su, sv = map_components(params, float(u[i]), float(v[i]))
            assert un[i] == su
            assert vn[i] == sv

    def test_holling_response(self):
        assert holling(1.0, 2.0, 1) == pytest.approx(1.0 / 3.0)
        assert holling(0.5, 0.25, 2) == pytest.approx(0.25 / 1.0625)


class TestJacobian:
    def test_origin(self, rng):
        for _ in range(20):
            params = _random_params(rng)
            np.testing.assert_allclose(jacobian(params, PlanktonState(u=0.0, v=0.0)),
                                       [[2.0, 0.0], [0.0, 1.0 - params.r]])

    def test_boundary_u1(self, rng):
        for _ in range(20):
            params = _random_params(rng)
            j = jacobian(params, PlanktonState(u=1.0, v=0.0))
            np.testing.assert_allclose(j[:, 0], [0.0, 0.0], atol=1e-15)
            assert j[0, 1] == -1.0
            assert j[1, 1] == pytest.approx(params.beta + 1.0 - params.r - params.theta / (1.0 + params.c))

    def test_matches_central_differences(self, rng):
        step = 1e-6
        for _ in range(100):
            params = _random_params(rng)
            u, v = rng.uniform(0.05, 1.0), rng.uniform(0.0, 2.0)
            j = jacobian(params, PlanktonState(u=u, v=v))
            up = np.array(map_components(params, u + step, v))
            um = np.array(map_components(params, u - step, v))
            vp = np.array(map_components(params, u, v + step))
            vm = np.array(map_components(params, u, v - step))
            numeric = np.column_stack([(up - um) / (2 * step), (vp - vm) / (2 * step)])
            np.testing.assert_allclose(j, numeric, atol=1e-6)


class TestPsi:
    def test_case_study_values(self, holling2_base, holling3_base):
        assert psi(holling2_base, 0.3796) == pytest.approx(1.2012, abs=1e-3)
        assert psi(holling3_base, 0.292) == pytest.approx(1.006, abs=1e-3)

    def test_limit_at_one(self, holling2_base, holling3_base):
        for base in (holling2_base, holling3_base):
            assert psi_unchecked(1.0, base.beta, base.r, base.c, base.h) == pytest.approx(base.psi_at_one)
        assert holling3_base.psi_at_one == pytest.approx(1.875)

    def test_negative_below_r_over_beta(self, holling2_base):
        assert psi(holling2_base, 0.2) < 0.0

    @pytest.mark.parametrize('u', [0.0, 1.0, -0.5, 1.5])
    def test_rejects_points_outside_unit_interval(self, holling2_base, u):
        with pytest.raises(InvalidParametersError):
            psi(holling2_base, u)

    def test_derivative_numerator(self, holling3_base):
        # Psi_2'(u) = f(u) / u^3
        u, step = 0.4, 1e-6
        b = holling3_base
        numeric = (psi(b, u + step) - psi(b, u - step)) / (2 * step)
        assert numeric == pytest.approx(psi2_derivative_numerator(u, b.beta, b.r, b.c) / u ** 3, rel=1e-7)

    def test_q_at_interior_point_is_jacobian_determinant(self, rng):
        for _ in range(50):
            base = BaseParams(beta=rng.uniform(0.6, 4.0), r=rng.uniform(0.05, 0.5), c=rng.uniform(0.05, 3.0),
                              h=int(rng.integers(1, 3)))
            u = rng.uniform(base.r / base.beta + 0.01, 0.99)
            params = base.with_theta(psi(base, u))
            j = jacobian(params, PlanktonState(u=u, v=1.0 - u))
            assert characteristic_q(params, u) == pytest.approx(np.linalg.det(j), abs=1e-10)
