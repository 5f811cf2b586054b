"""Kinetic energy in two-polar variables ``(R; lam, mu, rho; theta)``.

This module only evaluates energies.  It serves as an independent check of
the polar-variable dynamics, since both charts describe the same motion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .dynamics_polar import InertiaTensor, PolarVelocities
from .errors import DegenerateDeformation
from .kinematics import SpinVector, TwoPolarDeformation, nu_from_omega_theta


@dataclass(frozen=True)
class TwoPolarVelocities:
    omega: SpinVector = SpinVector()
    lam_dot: float = 0.0
    mu_dot: float = 0.0
    rho_dot: float = 0.0
    theta_dot: float = 0.0


@dataclass(frozen=True)
class TwoPolarMomenta:
    s1: float = 0.0
    s2: float = 0.0
    s3: float = 0.0
    p_lam: float = 0.0
    p_mu: float = 0.0
    p_rho: float = 0.0
    p_theta: float = 0.0


def kinetic_energy_two_polar(deformation: TwoPolarDeformation, vel: TwoPolarVelocities,
                             J: InertiaTensor) -> float:
    """Kinetic energy ``1/2 Tr(J dPhi^T dPhi)`` for a diagonal, anisotropic ``J``."""
    lam, mu, rho, theta = deformation.lam, deformation.mu, deformation.rho, deformation.theta
    j1, j2, j3 = J.as_tuple()
    w1, w2, w3 = vel.omega.nu1, vel.omega.nu2, vel.omega.nu3
    ld, md, rd, td = vel.lam_dot, vel.mu_dot, vel.rho_dot, vel.theta_dot
    c, s = math.cos(theta), math.sin(theta)
    jc = j1 * c * c + j2 * s * s
    js = j1 * s * s + j2 * c * c
    r2 = rho * rho
    # anisotropic coupling carries (j1 - j2) sin(theta) cos(theta)
    coupling = (j1 - j2) * s * c * ((mu * md - lam * ld) * td
                                    + (lam * md - mu * ld) * w3
                                    + lam * mu * w1 * w2)
    return (0.5 * jc * ld * ld
            + 0.5 * js * md * md
            + 0.5 * j3 * rd * rd
            + 0.5 * (js * mu * mu + j3 * r2) * w1 * w1
            + 0.5 * (jc * lam * lam + j3 * r2) * w2 * w2
            + (j1 + j2) * lam * mu * w3 * td
            + coupling
            + 0.5 * (jc * lam * lam + js * mu * mu) * w3 * w3
            + 0.5 * (js * lam * lam + jc * mu * mu) * td * td)


def polar_velocities(deformation: TwoPolarDeformation, vel: TwoPolarVelocities) -> PolarVelocities:
    """Rates of ``(nu; alpha, xi, zeta, rho)`` along a two-polar motion."""
    lam, mu, theta = deformation.lam, deformation.mu, deformation.theta
    c, s = math.cos(theta), math.sin(theta)
    c2, s2 = math.cos(2.0 * theta), math.sin(2.0 * theta)
    ld, md, td = vel.lam_dot, vel.mu_dot, vel.theta_dot
    return PolarVelocities(
        nu_from_omega_theta(vel.omega, theta, td),
        (ld - md) * s * c + (lam - mu) * c2 * td,
        ld * c * c + md * s * s + (mu - lam) * s2 * td,
        ld * s * s + md * c * c + (lam - mu) * s2 * td,
        vel.rho_dot,
    )


def legendre_isotropic(deformation: TwoPolarDeformation, vel: TwoPolarVelocities,
                       J: float, J3: float) -> TwoPolarMomenta:
    """Momenta of the isotropic (``j1 == j2 == J``) two-polar kinetic energy."""
    lam, mu, rho = deformation.lam, deformation.mu, deformation.rho
    w1, w2, w3 = vel.omega.nu1, vel.omega.nu2, vel.omega.nu3
    r2 = rho * rho
    return TwoPolarMomenta(
        (J * mu * mu + J3 * r2) * w1,
        (J * lam * lam + J3 * r2) * w2,
        J * (lam * lam + mu * mu) * w3 + 2.0 * J * lam * mu * vel.theta_dot,
        J * vel.lam_dot,
        J * vel.mu_dot,
        J3 * vel.rho_dot,
        J * (lam * lam + mu * mu) * vel.theta_dot + 2.0 * J * lam * mu * w3,
    )


def kinetic_energy_canonical_isotropic(deformation: TwoPolarDeformation, mom: TwoPolarMomenta,
                                       J: float, J3: float) -> float:
    """Canonical kinetic energy for ``j1 == j2 == J``.

    Raises :class:`DegenerateDeformation` at ``lam == mu``, where the
    two-polar chart is singular.
    """
    lam, mu, rho = deformation.lam, deformation.mu, deformation.rho
    if abs(lam - mu) <= 1e-10:
        raise DegenerateDeformation(f"lam == mu ({lam!r}); two-polar chart is singular")
    r2 = rho * rho
    l2, m2 = lam * lam, mu * mu
    return (mom.s1**2 / (2.0 * (J * m2 + J3 * r2))
            + mom.s2**2 / (2.0 * (J * l2 + J3 * r2))
            + ((l2 + m2) * (mom.s3**2 + mom.p_theta**2) - 4.0 * lam * mu * mom.p_theta * mom.s3)
            / (2.0 * J * (l2 - m2) ** 2)
            + (mom.p_lam**2 + mom.p_mu**2) / (2.0 * J)
            + mom.p_rho**2 / (2.0 * J3))
