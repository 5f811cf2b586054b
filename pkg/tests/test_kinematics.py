import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from klbody.errors import DegenerateConfiguration, PositivityViolation
from klbody.kinematics import (
    PolarDeformation,
    RotationMatrix,
    SpinVector,
    TwoPolarDeformation,
    TwoPolarState,
    configuration,
    deformation_invariants,
    ell_polar,
    ell_two_polar,
    green_tensor,
    kl_embed,
    nu_from_omega_theta,
    orthogonality_defect,
    polar_decompose,
    polar_from_two_polar,
    project_to_rotation,
    spin_matrix,
    spin_vector,
    two_polar_from_polar,
    u_theta,
)

stretch = st.floats(0.3, 3.0)
angle = st.floats(0.0, math.pi, exclude_max=True)
rotvec = st.lists(st.floats(-1.5, 1.5), min_size=3, max_size=3)


@st.composite
def polar_deformations(draw):
    xi, zeta, rho = draw(stretch), draw(stretch), draw(stretch)
    bound = 0.95 * math.sqrt(xi * zeta)
    return PolarDeformation(draw(st.floats(-bound, bound)), xi, zeta, rho)


class TestRotationMatrix:
    def test_rejects_reflection(self):
        with pytest.raises(ValueError):
            RotationMatrix(np.diag([1.0, 1.0, -1.0]))

    def test_rejects_non_orthogonal(self):
        with pytest.raises(ValueError):
            RotationMatrix(np.eye(3) * 1.01)

    def test_read_only(self):
        r = RotationMatrix.identity()
        with pytest.raises(ValueError):
            r.m[0, 0] = 2.0

    @given(rotvec)
    def test_rotvec_roundtrip(self, k):
        r = RotationMatrix.from_rotvec(k)
        np.testing.assert_allclose(r.as_rotvec(), k, atol=1e-12)
        assert orthogonality_defect(r.m) < 1e-14

    def test_projection_restores_orthogonality(self):
        m = RotationMatrix.from_rotvec((0.3, -0.2, 0.7)).m + 1e-6 * np.arange(9.0).reshape(3, 3)
        r = project_to_rotation(m)
        assert orthogonality_defect(r) < 1e-15
        assert np.linalg.det(r) == pytest.approx(1.0)

    def test_inverse(self):
        r = RotationMatrix.from_rotvec((0.4, 0.1, -0.9))
        np.testing.assert_allclose((r @ r.inv()).m, np.eye(3), atol=1e-15)


class TestPolarDeformation:
    @pytest.mark.parametrize("args", [(0.0, -1.0, 1.0, 1.0), (0.0, 1.0, 1.0, 0.0), (1.0, 1.0, 1.0, 1.0)])
    def test_domain(self, args):
        with pytest.raises(PositivityViolation):
            PolarDeformation(*args)

    def test_identity_matrix(self):
        np.testing.assert_array_equal(PolarDeformation.identity().matrix, np.eye(3))

    def test_green_tensor_is_s_squared(self):
        d = PolarDeformation(0.2, 1.3, 0.7, 1.1)
        np.testing.assert_allclose(green_tensor(d).matrix, d.matrix @ d.matrix, atol=1e-15)


class TestSpinMatrix:
    def test_convention(self):
        np.testing.assert_array_equal(
            spin_matrix((1.0, 2.0, 3.0)), [[0.0, 3.0, -2.0], [-3.0, 0.0, 1.0], [2.0, -1.0, 0.0]]
        )

    def test_roundtrip(self):
        v = np.array([0.3, -1.2, 2.5])
        np.testing.assert_array_equal(spin_vector(spin_matrix(v)), v)
        assert SpinVector.from_matrix(SpinVector(*v).matrix) == SpinVector(*v)

    def test_generates_left_invariant_flow(self):
        # L(t) = L0 exp(t A) has L^-1 dL/dt = A
        from scipy.linalg import expm

        nu = np.array([0.2, -0.5, 0.9])
        L0 = RotationMatrix.from_rotvec((0.1, 0.4, -0.3)).m
        h = 1e-6
        Ldot = (L0 @ expm(h * spin_matrix(nu)) - L0 @ expm(-h * spin_matrix(nu))) / (2 * h)
        np.testing.assert_allclose(spin_vector(L0.T @ Ldot), nu, atol=1e-9)


class TestConversions:
    def test_reference_values(self):
        state = TwoPolarState(RotationMatrix.identity(), TwoPolarDeformation(2.0, 1.0, 1.0, math.pi / 4))
        _, d = polar_from_two_polar(state)
        assert d.alpha == pytest.approx(0.5, abs=1e-15)
        assert d.xi == pytest.approx(1.5, abs=1e-15)
        assert d.zeta == pytest.approx(1.5, abs=1e-15)
        assert ell_two_polar(state.deformation) == pytest.approx(0.5)
        assert ell_polar(d) == pytest.approx(0.5)

    def test_identity(self):
        state = two_polar_from_polar(RotationMatrix.identity(), PolarDeformation.identity())
        assert state.deformation == TwoPolarDeformation(1.0, 1.0, 1.0, 0.0)
        assert deformation_invariants(PolarDeformation.identity()).as_tuple() == (1.0, 1.0, 1.0)

    @given(rotvec, stretch, stretch, stretch, angle)
    def test_same_configuration(self, k, lam, mu, rho, theta):
        state = TwoPolarState(RotationMatrix.from_rotvec(k), TwoPolarDeformation(lam, mu, rho, theta))
        L, d = polar_from_two_polar(state)
        np.testing.assert_allclose(configuration(L, d), state.matrix, atol=1e-12)

    @given(rotvec, polar_deformations())
    def test_roundtrip_from_polar(self, k, d):
        L = RotationMatrix.from_rotvec(k)
        L2, d2 = polar_from_two_polar(two_polar_from_polar(L, d))
        np.testing.assert_allclose(d2.as_tuple(), d.as_tuple(), atol=1e-12)
        np.testing.assert_allclose(L2.m, L.m, atol=1e-12)

    @settings(max_examples=200)
    @given(stretch, stretch, stretch, angle)
    def test_roundtrip_from_two_polar(self, lam, mu, rho, theta):
        # the chart is only one-to-one for lam > mu, away from the degenerate point
        if lam - mu < 1e-3:
            lam, mu = mu + 1e-3 + abs(lam - mu), min(lam, mu)
        src = TwoPolarDeformation(lam, mu, rho, theta)
        L, d = polar_from_two_polar(TwoPolarState(RotationMatrix.identity(), src))
        back = two_polar_from_polar(L, d)
        np.testing.assert_allclose(
            [back.deformation.lam, back.deformation.mu, back.deformation.rho, back.deformation.theta],
            [lam, mu, rho, theta], atol=1e-12,
        )
        np.testing.assert_allclose(back.R.m, np.eye(3), atol=1e-12)

    def test_nu_from_omega_theta(self):
        # differentiate L = R U^T numerically
        from scipy.linalg import expm

        omega, theta, theta_dot = np.array([0.3, -0.7, 0.2]), 0.4, 0.9
        h = 1e-6

        def L(t):
            return expm(t * spin_matrix(omega)) @ u_theta(theta + theta_dot * t).T

        nu = spin_vector(L(0).T @ (L(h) - L(-h)) / (2 * h))
        np.testing.assert_allclose(nu_from_omega_theta(SpinVector(*omega), theta, theta_dot).as_array(),
                                   nu, atol=1e-9)


class TestKirchhoffLove:
    @given(rotvec, polar_deformations())
    def test_third_column(self, k, d):
        phi = configuration(RotationMatrix.from_rotvec(k), d)
        np.testing.assert_allclose(kl_embed(phi[:, :2], ell_polar(d)), phi, atol=1e-12)

    def test_degenerate_plane(self):
        with pytest.raises(DegenerateConfiguration):
            kl_embed(np.array([[1.0, 2.0], [0.0, 0.0], [0.0, 0.0]]), 1.0)

    def test_polar_decompose_roundtrip(self):
        L = RotationMatrix.from_rotvec((0.5, -0.1, 0.2))
        d = PolarDeformation(-0.3, 1.4, 0.9, 0.7)
        L2, d2 = polar_decompose(configuration(L, d))
        np.testing.assert_allclose(L2.m, L.m, atol=1e-12)
        np.testing.assert_allclose(d2.as_tuple(), d.as_tuple(), atol=1e-12)

    def test_polar_decompose_rejects_sheared_normal(self):
        phi = np.eye(3)
        phi[0, 2] = 0.3
        with pytest.raises(ValueError):
            polar_decompose(phi)


class TestInvariants:
    @given(polar_deformations())
    def test_eigenvalues(self, d):
        k = deformation_invariants(d)
        eig = np.linalg.eigvalsh(green_tensor(d).matrix[:2, :2])
        np.testing.assert_allclose([k.k2, k.k1], eig, rtol=1e-10, atol=1e-12)
        assert k.k3 == d.rho**2

    @given(rotvec, polar_deformations())
    def test_rotation_invariance(self, k, d):
        # left rotations leave Phi^T Phi alone
        phi = RotationMatrix.from_rotvec(k).m @ configuration(RotationMatrix.identity(), d)
        eig = np.linalg.eigvalsh(phi.T @ phi)
        np.testing.assert_allclose(sorted(deformation_invariants(d).as_tuple()), eig, rtol=1e-10)
