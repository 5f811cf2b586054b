import numpy as np
import pytest

from klbody.errors import DomainError
from klbody.potentials import PotentialModel, v_plane_harmonic, v_plane_invariant, v_rho_barrier


def central_diff(f, x, h=1e-6):
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(*(x + e)) - f(*(x - e))) / (2 * h)
    return g


class TestVRho:
    def test_minimum(self):
        for a, b in [(1.0, 1.0), (2.0, 0.5), (0.3, 4.0)]:
            rho = (a / b) ** (1.0 / 3.0)
            assert v_rho_barrier(rho, a, b)[1] == pytest.approx(0.0, abs=1e-14)
            assert PotentialModel(params={"a": a, "b": b, "c": 1.0}).rho_star == pytest.approx(rho)

    def test_derivative(self):
        for rho in (0.3, 1.0, 2.7):
            fd = central_diff(lambda r: v_rho_barrier(r, 1.5, 0.7)[0], [rho])[0]
            assert v_rho_barrier(rho, 1.5, 0.7)[1] == pytest.approx(fd, rel=1e-8)

    @pytest.mark.parametrize("rho", [0.0, -1.0])
    def test_domain(self, rho):
        with pytest.raises(DomainError):
            v_rho_barrier(rho)


class TestVPlane:
    @pytest.mark.parametrize("fun", [v_plane_harmonic, v_plane_invariant])
    def test_gradient(self, fun):
        q = [0.15, 1.2, 0.8]
        fd = central_diff(lambda *x: fun(*x, c=1.3)[0], q)
        np.testing.assert_allclose(fun(*q, c=1.3)[1], fd, rtol=1e-7, atol=1e-9)

    @pytest.mark.parametrize("fun", [v_plane_harmonic, v_plane_invariant])
    def test_minimum_at_identity(self, fun):
        value, grad = fun(0.0, 1.0, 1.0)
        assert value == pytest.approx(0.0, abs=1e-15)
        np.testing.assert_allclose(grad, 0.0, atol=1e-15)

    def test_invariant_depends_on_invariants_only(self):
        # same eigenvalues of the in-plane block, different orientation
        a = v_plane_invariant(0.0, 1.5, 0.5)[0]
        b = v_plane_invariant(0.5, 1.0, 1.0)[0]
        assert a == pytest.approx(b, rel=1e-14)


class TestPotentialModel:
    def test_rejects_non_positive_params(self):
        with pytest.raises(ValueError):
            PotentialModel(params={"a": -1.0, "b": 1.0, "c": 1.0})

    def test_unknown_model(self):
        with pytest.raises(ValueError):
            PotentialModel(plane="nope")

    def test_callable_plane_uses_fd_gradient(self):
        model = PotentialModel(plane=lambda al, x, z, **params: (x - 2.0) ** 2 + al**2 * z)
        _, grad = model.v_plane(0.3, 1.0, 2.0)
        np.testing.assert_allclose(grad, [1.2, -2.0, 0.09], rtol=1e-6)

    def test_value_sums_parts(self):
        m = PotentialModel()
        assert m.value(0.1, 1.2, 0.9, 1.1) == pytest.approx(
            v_plane_harmonic(0.1, 1.2, 0.9)[0] + v_rho_barrier(1.1)[0]
        )
