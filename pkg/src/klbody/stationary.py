"""Stationary rotations with a constant Green tensor.

On such a motion the stretch ``S`` and the angular velocity ``nu`` are both
constant, so ``Phi(t) = exp(nu_hat t) L0 S``.  Three families exist:

* ``axis1`` / ``axis2``: ``nu`` in the central plane.  Only ``pi1, pi2`` are
  non-zero and the deformation must balance the centrifugal terms, plus one
  compatibility relation (``dpi3/dt = 0``).
* ``axis3``: rotation about the normal.  ``pi3`` and the in-plane momenta
  ``p_alpha, p_xi, p_zeta`` are non-zero, and ``rho`` sits at a critical point
  of ``V_rho``.

The residuals below are written out independently of :mod:`dynamics_polar`
so that the two can be checked against each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .dynamics_polar import InertiaTensor, PhasePoint, PolarMomenta, legendre_inverse
from .errors import NoConvergence
from .kinematics import PolarDeformation, RotationMatrix, SpinVector, spin_matrix
from .newton import damped_newton
from .potentials import PotentialModel

BRANCHES = ("axis1", "axis2", "axis3")


def _branch_name(branch) -> str:
    if isinstance(branch, int) and 1 <= branch <= 3:
        return f"axis{branch}"
    if branch in BRANCHES:
        return branch
    raise ValueError(f"branch must be 1, 2, 3 or one of {BRANCHES}, got {branch!r}")


@dataclass(frozen=True)
class StationarySolution:
    branch: str
    spin: tuple
    deformation: PolarDeformation
    momenta: PolarMomenta
    residual_norm: float
    iterations: int = 0

    def phase_point(self, L0: RotationMatrix | None = None, t: float = 0.0) -> PhasePoint:
        return PhasePoint(L0 or RotationMatrix.identity(), self.deformation, self.momenta, t)

    def angular_velocity(self, J: InertiaTensor) -> SpinVector:
        return legendre_inverse(self.deformation, self.momenta, J).nu


@dataclass(frozen=True)
class StationaryOrbit:
    """``Phi(t) = exp(nu_hat t) phi0`` with ``nu_hat`` in the spatial frame."""

    phi0: np.ndarray
    nu_hat: np.ndarray

    def at(self, t: float) -> np.ndarray:
        return expm(self.nu_hat * t) @ self.phi0


def _xi_symbol(alpha, xi, zeta, rho, j1, j2, j3):
    return (j1 * j2 * (alpha**2 - xi * zeta) ** 2
            + (j1 * xi**2 + j2 * zeta**2 + (j1 + j2) * alpha**2) * j3 * rho**2
            + j3**2 * rho**4)


def residual_branch12(deformation: PolarDeformation, pi1: float, pi2: float,
                      J: InertiaTensor, pot: PotentialModel) -> np.ndarray:
    """Balance of forces for in-plane rotation, plus the compatibility relation.

    Components 0-3 are ``dV/dq - (centrifugal term)`` for ``alpha, xi, zeta,
    rho``; component 4 is the compatibility expression.  All vanish on a
    stationary solution.
    """
    alpha, xi, zeta, rho = deformation.as_tuple()
    j1, j2, j3 = J.as_tuple()
    Xi = _xi_symbol(alpha, xi, zeta, rho, j1, j2, j3)
    Omega = ((j1 * xi**2 + j2 * alpha**2 + j3 * rho**2) * pi1**2
             + 2.0 * (j1 * xi + j2 * zeta) * alpha * pi1 * pi2
             + (j1 * alpha**2 + j2 * zeta**2 + j3 * rho**2) * pi2**2)
    _, (ga, gx, gz) = pot.v_plane(alpha, xi, zeta)
    _, dvr = pot.v_rho(rho)
    det = xi * zeta - alpha**2
    rhs_a = (-((j2 * pi1**2 + j1 * pi2**2) * alpha + (j1 * xi + j2 * zeta) * pi1 * pi2) / Xi
             + (2.0 * j1 * j2 * alpha * (alpha**2 - xi * zeta) + (j1 + j2) * alpha * j3 * rho**2)
             / Xi**2 * Omega)
    rhs_x = (-(j1 * xi * pi1**2 + j1 * alpha * pi1 * pi2) / Xi
             + (j1 * j2 * zeta * det + j1 * xi * j3 * rho**2) / Xi**2 * Omega)
    rhs_z = (-(j2 * zeta * pi2**2 + j2 * alpha * pi1 * pi2) / Xi
             + (j1 * xi * j2 * det + j2 * zeta * j3 * rho**2) / Xi**2 * Omega)
    rhs_r = (-j3 * rho / Xi * (pi1**2 + pi2**2)
             + j3 * rho / Xi**2 * (j1 * xi**2 + j2 * zeta**2 + (j1 + j2) * alpha**2
                                   + 2.0 * j3 * rho**2) * Omega)
    compat = ((j1 * xi + j2 * zeta) * alpha * (pi1**2 - pi2**2)
              + (j1 * (alpha**2 - xi**2) + j2 * (zeta**2 - alpha**2)) * pi1 * pi2)
    return np.array([ga - rhs_a, gx - rhs_x, gz - rhs_z, dvr - rhs_r, compat])


def branch3_momenta(deformation: PolarDeformation, pi3: float, J: InertiaTensor):
    """``(p_alpha, p_xi, p_zeta)`` that keep ``alpha, xi, zeta`` fixed under rotation about the normal."""
    alpha, xi, zeta, _ = deformation.as_tuple()
    j1, j2, _ = J.as_tuple()
    inertia = j1 * xi**2 + j2 * zeta**2 + (j1 + j2) * alpha**2
    return (
        (j2 * zeta - j1 * xi) * pi3 / inertia,
        j1 * alpha * pi3 / inertia,
        -j2 * alpha * pi3 / inertia,
    )


def residual_branch3(deformation: PolarDeformation, pi3: float, J: InertiaTensor,
                     pot: PotentialModel):
    """Force balance for rotation about the normal.

    Returns
    -------
    residual : ndarray, shape (4,)
    momenta : tuple
        The derived ``(p_alpha, p_xi, p_zeta)``.
    """
    alpha, xi, zeta, rho = deformation.as_tuple()
    j1, j2, _ = J.as_tuple()
    pa, px, pz = branch3_momenta(deformation, pi3, J)
    _, (ga, gx, gz) = pot.v_plane(alpha, xi, zeta)
    _, dvr = pot.v_rho(rho)
    X = pi3 + alpha * (pz - px)
    den = j1 * j2 * (xi + zeta) ** 2
    ups = ((j1 + j2) * X**2 + (j1 * xi**2 + j2 * zeta**2) * pa**2
           + 2.0 * (j1 * xi - j2 * zeta) * X * pa)
    rhs_a = ((j1 + j2) * X + (j1 * xi - j2 * zeta) * pa) / den * (px - pz)
    rhs_x = -(j1 * xi * pa**2 + j1 * X * pa) / den + ups / (den * (xi + zeta))
    rhs_z = -(j2 * zeta * pa**2 - j2 * X * pa) / den + ups / (den * (xi + zeta))
    return np.array([ga - rhs_a, gx - rhs_x, gz - rhs_z, dvr]), (pa, px, pz)


def _valid(x):
    alpha, xi, zeta, rho = x[:4]
    return xi > 0.0 and zeta > 0.0 and rho > 0.0 and xi * zeta - alpha**2 > 0.0


def default_guess(pot: PotentialModel) -> PolarDeformation:
    """Identity stretch with ``rho`` at the minimum of ``V_rho``."""
    if "a" in pot.params and "b" in pot.params:
        return PolarDeformation.identity(pot.rho_star)
    return PolarDeformation.identity()


def solve_stationary(branch, spin_value: float, J: InertiaTensor, pot: PotentialModel,
                     guess: PolarDeformation | None = None, *, pi_other: float | None = None,
                     tol: float = 1e-10, max_iter: int = 200) -> StationarySolution:
    """Find the deformation that balances a given spin.

    Parameters
    ----------
    branch : {1, 2, 3} or {"axis1", "axis2", "axis3"}
    spin_value : float
        ``pi3`` for ``axis3``; ``pi1`` for ``axis1``; ``pi2`` for ``axis2``.
    guess : PolarDeformation, optional
        Defaults to :func:`default_guess`.
    pi_other : float, optional
        In-plane branches only.  When given, the other in-plane spin is held
        at this value and the overdetermined system is solved in the least
        squares sense.  Otherwise it is an unknown (starting from 0).

    Raises
    ------
    NoConvergence
        Carries the best iterate (as a :class:`StationarySolution`) in ``best``.
    PositivityViolation
        When Newton cannot stay inside the valid deformation domain.
    """
    name = _branch_name(branch)
    spin_value = float(spin_value)
    guess = guess or default_guess(pot)
    x0 = list(guess.as_tuple())

    if name == "axis3":
        def fun(x):
            return residual_branch3(PolarDeformation(*x), spin_value, J, pot)[0]

        def assemble(x, norm, it):
            d = PolarDeformation(*x)
            pa, px, pz = branch3_momenta(d, spin_value, J)
            return StationarySolution(name, (spin_value,), d,
                                      PolarMomenta(0.0, 0.0, spin_value, pa, px, pz, 0.0), norm, it)
    else:
        first = name == "axis1"

        def spins(x):
            other = x[4] if pi_other is None else pi_other
            return (spin_value, other) if first else (other, spin_value)

        def fun(x):
            return residual_branch12(PolarDeformation(*x[:4]), *spins(x), J, pot)

        def assemble(x, norm, it):
            p1, p2 = spins(x)
            return StationarySolution(name, (p1, p2), PolarDeformation(*x[:4]),
                                      PolarMomenta(p1, p2, 0.0, 0.0, 0.0, 0.0, 0.0), norm, it)

        if pi_other is None:
            x0.append(0.0)

    try:
        x, norm, it = damped_newton(fun, x0, valid=_valid, tol=tol, max_iter=max_iter)
    except NoConvergence as exc:
        best = None
        if exc.best is not None:
            best = assemble(exc.best.tolist(), exc.residual_norm, max_iter)
        raise NoConvergence(str(exc), best=best, residual_norm=exc.residual_norm) from exc
    return assemble(x.tolist(), norm, it)


def stationary_orbit(L0: RotationMatrix, nu: SpinVector, S: PolarDeformation, t: float) -> np.ndarray:
    """Configuration at time ``t`` of a stationary rotation: ``exp(nu_hat t) L0 S``."""
    return orbit(L0, nu, S).at(t)


def orbit(L0: RotationMatrix, nu: SpinVector, S: PolarDeformation) -> StationaryOrbit:
    nu_hat = L0.m @ spin_matrix(nu.as_array()) @ L0.m.T
    return StationaryOrbit(L0.m @ S.matrix, nu_hat)


def max_green_drift(traj) -> float:
    """Largest deviation of any Green-tensor entry from its initial value."""
    g = traj.green_tensors()
    return float(np.max(np.abs(g - g[0])))


def max_spin_drift(traj) -> float:
    s = traj.states[:, 13:16]
    return float(np.max(np.abs(s - s[0])))

