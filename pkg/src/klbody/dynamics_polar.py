"""Hamiltonian dynamics in polar variables ``(L; alpha, xi, zeta, rho)``.

Velocities are the co-moving angular velocity ``nu = L^-1 dL/dt`` and the
rates of the stretch parameters.  Conjugate momenta are the spins
``pi1..pi3`` and ``p_alpha, p_xi, p_zeta, p_rho``.  The inertia tensor is
diagonal, ``J = diag(j1, j2, j3)``, with no isotropy assumed.

Phase points are flattened to 20 floats in the order

    L (9, row-major), alpha, xi, zeta, rho, pi1, pi2, pi3,
    p_alpha, p_xi, p_zeta, p_rho

which is the layout the integrator works on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import SingularMassMatrix
from .kinematics import PolarDeformation, RotationMatrix, SpinVector, check_polar_domain
from .potentials import PotentialModel

STATE_SIZE = 20
DEFAULT_SPIN_BRACKET = -1.0


@dataclass(frozen=True)
class InertiaTensor:
    j1: float
    j2: float
    j3: float

    def __post_init__(self):
        for name in ("j1", "j2", "j3"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"inertia component {name} must be positive, got {value!r}")

    def as_tuple(self):
        return (self.j1, self.j2, self.j3)


@dataclass(frozen=True)
class PolarVelocities:
    nu: SpinVector = SpinVector()
    alpha_dot: float = 0.0
    xi_dot: float = 0.0
    zeta_dot: float = 0.0
    rho_dot: float = 0.0

    def as_tuple(self):
        """``(nu1, nu2, nu3, alpha_dot, xi_dot, zeta_dot, rho_dot)``."""
        return (self.nu.nu1, self.nu.nu2, self.nu.nu3,
                self.alpha_dot, self.xi_dot, self.zeta_dot, self.rho_dot)

    @classmethod
    def from_tuple(cls, v) -> "PolarVelocities":
        n1, n2, n3, ad, xd, zd, rd = (float(x) for x in v)
        return cls(SpinVector(n1, n2, n3), ad, xd, zd, rd)


@dataclass(frozen=True)
class PolarMomenta:
    pi1: float = 0.0
    pi2: float = 0.0
    pi3: float = 0.0
    p_alpha: float = 0.0
    p_xi: float = 0.0
    p_zeta: float = 0.0
    p_rho: float = 0.0

    def as_tuple(self):
        return (self.pi1, self.pi2, self.pi3, self.p_alpha, self.p_xi, self.p_zeta, self.p_rho)

    @classmethod
    def from_tuple(cls, m) -> "PolarMomenta":
        return cls(*(float(x) for x in m))

    @property
    def spin(self) -> np.ndarray:
        return np.array([self.pi1, self.pi2, self.pi3])


@dataclass(frozen=True)
class PhasePoint:
    L: RotationMatrix
    deformation: PolarDeformation
    momenta: PolarMomenta = PolarMomenta()
    t: float = 0.0

    def to_array(self) -> np.ndarray:
        return np.concatenate(
            [self.L.m.ravel(), self.deformation.as_tuple(), self.momenta.as_tuple()]
        )

    @classmethod
    def from_array(cls, y, t: float = 0.0, check: bool = True) -> "PhasePoint":
        y = np.asarray(y, dtype=float)
        if y.shape != (STATE_SIZE,):
            raise ValueError(f"flat phase point must have {STATE_SIZE} entries, got {y.shape}")
        return cls(
            RotationMatrix(y[:9].reshape(3, 3), check=check),
            PolarDeformation(*y[9:13].tolist()),
            PolarMomenta.from_tuple(y[13:]),
            float(t),
        )


@dataclass(frozen=True)
class AuxiliarySymbols:
    """Denominator ``Xi`` of the spin block and the quadratic forms ``Omega``, ``Upsilon``."""

    Xi: float
    Omega: float
    Upsilon: float


@dataclass(frozen=True)
class PhaseRates:
    """Time derivative of a :class:`PhasePoint`."""

    L_dot: np.ndarray
    alpha_dot: float
    xi_dot: float
    zeta_dot: float
    rho_dot: float
    momenta_dot: PolarMomenta
    nu: SpinVector

    def to_array(self) -> np.ndarray:
        return np.concatenate(
            [np.ravel(self.L_dot), [self.alpha_dot, self.xi_dot, self.zeta_dot, self.rho_dot],
             self.momenta_dot.as_tuple()]
        )


# -- scalar kernels --------------------------------------------------------


def _xi_symbol(alpha, xi, zeta, rho, j1, j2, j3):
    r2 = rho * rho
    det = alpha * alpha - xi * zeta
    return (j1 * j2 * det * det
            + (j1 * xi * xi + j2 * zeta * zeta + (j1 + j2) * alpha * alpha) * j3 * r2
            + j3 * j3 * r2 * r2)


def _inverse(alpha, xi, zeta, rho, m, j1, j2, j3):
    """Velocities plus the intermediate quantities shared with the force terms."""
    pi1, pi2, pi3, pa, px, pz, pr = m
    r2 = rho * rho
    a11 = j1 * xi * xi + j2 * alpha * alpha + j3 * r2
    a22 = j1 * alpha * alpha + j2 * zeta * zeta + j3 * r2
    cc = (j1 * xi + j2 * zeta) * alpha
    Xi = _xi_symbol(alpha, xi, zeta, rho, j1, j2, j3)
    den = j1 * j2 * (xi + zeta) ** 2
    if abs(Xi) < 1e-14 or abs(den) < 1e-14:
        raise SingularMassMatrix(f"vanishing kinetic denominator (Xi={Xi!r}, J1J2(xi+zeta)^2={den!r})")
    X = pi3 + alpha * (pz - px)
    Z = (j1 + j2) * X + (j1 * xi - j2 * zeta) * pa
    nu1 = (a11 * pi1 + cc * pi2) / Xi
    nu2 = (cc * pi1 + a22 * pi2) / Xi
    nu3 = Z / den
    ad = ((j1 * xi - j2 * zeta) * X + (j1 * xi * xi + j2 * zeta * zeta) * pa) / den
    xd = px / j1 - alpha * nu3
    zd = pz / j2 + alpha * nu3
    rd = pr / j3
    return (nu1, nu2, nu3, ad, xd, zd, rd), (a11, a22, cc, Xi, den, X)


def _forces(alpha, xi, zeta, rho, m, j1, j2, j3, grad_plane, dv_rho, nu, aux, spin_bracket):
    pi1, pi2, pi3, pa, px, pz, pr = m
    nu1, nu2, nu3 = nu
    a11, a22, cc, Xi, den, X = aux
    r2 = rho * rho
    Omega = a11 * pi1 * pi1 + 2.0 * cc * pi1 * pi2 + a22 * pi2 * pi2
    Ups = ((j1 + j2) * X * X + (j1 * xi * xi + j2 * zeta * zeta) * pa * pa
           + 2.0 * (j1 * xi - j2 * zeta) * X * pa)
    om_xi2 = Omega / (Xi * Xi)
    det = xi * zeta - alpha * alpha
    p12 = pi1 * pi2

    # {pi_i, pi_j} = s eps_ijk pi_k  =>  dpi/dt = s (nu x pi); s = -1 is the default
    s = spin_bracket
    dpi1 = s * (nu2 * pi3 - nu3 * pi2)
    dpi2 = s * (nu3 * pi1 - nu1 * pi3)
    dpi3 = s * (nu1 * pi2 - nu2 * pi1)

    ga, gx, gz = grad_plane
    dpa = (-ga
           - ((j2 * pi1 * pi1 + j1 * pi2 * pi2) * alpha + (j1 * xi + j2 * zeta) * p12) / Xi
           + (-2.0 * j1 * j2 * alpha * det + (j1 + j2) * alpha * j3 * r2) * om_xi2
           - nu3 * (pz - px))
    ups_term = Ups / (den * (xi + zeta))
    dpx = (-gx
           - (j1 * xi * pi1 * pi1 + j1 * alpha * p12) / Xi
           + (j1 * j2 * zeta * det + j1 * xi * j3 * r2) * om_xi2
           - (j1 * xi * pa * pa + j1 * X * pa) / den
           + ups_term)
    dpz = (-gz
           - (j2 * zeta * pi2 * pi2 + j2 * alpha * p12) / Xi
           + (j1 * xi * j2 * det + j2 * zeta * j3 * r2) * om_xi2
           - (j2 * zeta * pa * pa - j2 * X * pa) / den
           + ups_term)
    dpr = (-dv_rho
           - j3 * rho * (pi1 * pi1 + pi2 * pi2) / Xi
           + j3 * rho * (j1 * xi * xi + j2 * zeta * zeta + (j1 + j2) * alpha * alpha
                         + 2.0 * j3 * r2) * om_xi2)
    return (dpi1, dpi2, dpi3, dpa, dpx, dpz, dpr), Omega, Ups


def flat_rhs(y, J: InertiaTensor, pot: PotentialModel, spin_bracket: float = DEFAULT_SPIN_BRACKET):
    """Right-hand side on the flat 20-float layout; returns a list of floats."""
    (l11, l12, l13, l21, l22, l23, l31, l32, l33,
     alpha, xi, zeta, rho, *m) = y
    j1, j2, j3 = J.j1, J.j2, J.j3
    vel, aux = _inverse(alpha, xi, zeta, rho, m, j1, j2, j3)
    nu1, nu2, nu3 = vel[:3]
    grad = pot.v_plane(alpha, xi, zeta)[1]
    dv_rho = pot.v_rho(rho)[1]
    dm, _, _ = _forces(alpha, xi, zeta, rho, m, j1, j2, j3, grad, dv_rho, vel[:3], aux, spin_bracket)
    # dL/dt = L @ [[0, nu3, -nu2], [-nu3, 0, nu1], [nu2, -nu1, 0]]
    return [
        l12 * -nu3 + l13 * nu2, l11 * nu3 - l13 * nu1, -l11 * nu2 + l12 * nu1,
        l22 * -nu3 + l23 * nu2, l21 * nu3 - l23 * nu1, -l21 * nu2 + l22 * nu1,
        l32 * -nu3 + l33 * nu2, l31 * nu3 - l33 * nu1, -l31 * nu2 + l32 * nu1,
        *vel[3:], *dm,
    ]


# -- public operations -----------------------------------------------------


def kinetic_energy_velocities(deformation: PolarDeformation, vel: PolarVelocities, J: InertiaTensor):
    """Kinetic energy split into rotational, coupling and deformation parts.

    Returns
    -------
    (T_total, T_rot, T_rot_def, T_def)
    """
    alpha, xi, zeta, rho = deformation.as_tuple()
    j1, j2, j3 = J.as_tuple()
    n1, n2, n3, ad, xd, zd, rd = vel.as_tuple()
    r2 = rho * rho
    t_rot = (0.5 * (j1 * alpha**2 + j2 * zeta**2 + j3 * r2) * n1 * n1
             + 0.5 * (j1 * xi**2 + j2 * alpha**2 + j3 * r2) * n2 * n2
             + 0.5 * (j1 * xi**2 + j2 * zeta**2 + (j1 + j2) * alpha**2) * n3 * n3
             - (j1 * xi + j2 * zeta) * alpha * n1 * n2)
    t_rot_def = (j1 * alpha * xd - j2 * alpha * zd - (j1 * xi - j2 * zeta) * ad) * n3
    t_def = 0.5 * ((j1 + j2) * ad * ad + j1 * xd * xd + j2 * zd * zd + j3 * rd * rd)
    return t_rot + t_rot_def + t_def, t_rot, t_rot_def, t_def


def legendre_forward(deformation: PolarDeformation, vel: PolarVelocities, J: InertiaTensor) -> PolarMomenta:
    alpha, xi, zeta, rho = deformation.as_tuple()
    j1, j2, j3 = J.as_tuple()
    n1, n2, n3, ad, xd, zd, rd = vel.as_tuple()
    r2 = rho * rho
    cc = (j1 * xi + j2 * zeta) * alpha
    return PolarMomenta(
        (j1 * alpha**2 + j2 * zeta**2 + j3 * r2) * n1 - cc * n2,
        (j1 * xi**2 + j2 * alpha**2 + j3 * r2) * n2 - cc * n1,
        ((j1 * xi**2 + j2 * zeta**2 + (j1 + j2) * alpha**2) * n3
         + j1 * alpha * xd - j2 * alpha * zd - (j1 * xi - j2 * zeta) * ad),
        (j1 + j2) * ad - (j1 * xi - j2 * zeta) * n3,
        j1 * (xd + alpha * n3),
        j2 * (zd - alpha * n3),
        j3 * rd,
    )


def legendre_inverse(deformation: PolarDeformation, mom: PolarMomenta, J: InertiaTensor) -> PolarVelocities:
    vel, _ = _inverse(*deformation.as_tuple(), mom.as_tuple(), *J.as_tuple())
    return PolarVelocities.from_tuple(vel)


def auxiliary_symbols(deformation: PolarDeformation, mom: PolarMomenta, J: InertiaTensor) -> AuxiliarySymbols:
    alpha, xi, zeta, rho = deformation.as_tuple()
    j1, j2, j3 = J.as_tuple()
    pi1, pi2, pi3, pa, px, pz, _ = mom.as_tuple()
    r2 = rho * rho
    Xi = _xi_symbol(alpha, xi, zeta, rho, j1, j2, j3)
    Omega = ((j1 * xi**2 + j2 * alpha**2 + j3 * r2) * pi1 * pi1
             + 2.0 * (j1 * xi + j2 * zeta) * alpha * pi1 * pi2
             + (j1 * alpha**2 + j2 * zeta**2 + j3 * r2) * pi2 * pi2)
    X = pi3 + alpha * (pz - px)
    Ups = ((j1 + j2) * X * X + (j1 * xi**2 + j2 * zeta**2) * pa * pa
           + 2.0 * (j1 * xi - j2 * zeta) * X * pa)
    return AuxiliarySymbols(Xi, Omega, Ups)


def kinetic_energy_canonical(deformation: PolarDeformation, mom: PolarMomenta, J: InertiaTensor) -> float:
    """Kinetic energy as a function of the canonical momenta."""
    alpha, xi, zeta, _ = deformation.as_tuple()
    j1, j2, j3 = J.as_tuple()
    aux = auxiliary_symbols(deformation, mom, J)
    return (aux.Omega / (2.0 * aux.Xi)
            + aux.Upsilon / (2.0 * j1 * j2 * (xi + zeta) ** 2)
            + mom.p_xi**2 / (2.0 * j1)
            + mom.p_zeta**2 / (2.0 * j2)
            + mom.p_rho**2 / (2.0 * j3))


def hamiltonian(deformation: PolarDeformation, mom: PolarMomenta, J: InertiaTensor, pot: PotentialModel) -> float:
    alpha, xi, zeta, rho = deformation.as_tuple()
    return (kinetic_energy_canonical(deformation, mom, J)
            + pot.v_plane(alpha, xi, zeta)[0] + pot.v_rho(rho)[0])


def flat_hamiltonian(y, J: InertiaTensor, pot: PotentialModel) -> float:
    return hamiltonian(PolarDeformation(*y[9:13]), PolarMomenta.from_tuple(y[13:]), J, pot)


def eom_rhs(p: PhasePoint, J: InertiaTensor, pot: PotentialModel,
            spin_bracket: float = DEFAULT_SPIN_BRACKET) -> PhaseRates:
    """Hamilton's equations at a phase point.

    Coordinate rates come from the inverse Legendre map, forces are
    ``dp/dt = -dH/dq`` and ``dL/dt = L spin_matrix(nu)``.  ``spin_bracket``
    is the sign ``s`` in ``{pi_i, pi_j} = s eps_ijk pi_k``; the default ``-1``
    gives ``dpi/dt = pi x nu``, the customary form of the spin equations; ``+1`` is the sign for which the
    spatial spin ``L pi`` is conserved under the module's ``nu`` convention.
    """
    check_polar_domain(*p.deformation.as_tuple())
    y = p.to_array().tolist()
    d = flat_rhs(y, J, pot, spin_bracket)
    vel, _ = _inverse(*p.deformation.as_tuple(), p.momenta.as_tuple(), *J.as_tuple())
    return PhaseRates(
        np.array(d[:9]).reshape(3, 3),
        d[9], d[10], d[11], d[12],
        PolarMomenta.from_tuple(d[13:]),
        SpinVector(*vel[:3]),
    )


def spatial_spin(p: PhasePoint) -> np.ndarray:
    """``L pi``: the spin carried to the spatial frame."""
    return p.L.m @ p.momenta.spin
