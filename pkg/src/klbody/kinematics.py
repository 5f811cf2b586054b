"""Configurations of a Kirchhoff-Love constrained affine body.

A configuration is a 3x3 matrix ``Phi`` whose third column is proportional to
the cross product of the first two.  It is parameterized either by the polar
decomposition ``Phi = L S`` with

    S = [[xi, alpha, 0], [alpha, zeta, 0], [0, 0, rho]]

or by the two-polar (singular value) decomposition ``Phi = R D U(theta)^-1``
with ``D = diag(lam, mu, rho)`` and ``U(theta)`` an in-plane rotation.

Angular velocities are stored as 3-vectors.  The matching antisymmetric
matrix follows the convention

    spin_matrix(nu) = [[0, nu3, -nu2], [-nu3, 0, nu1], [nu2, -nu1, 0]]

so ``L^-1 dL/dt = spin_matrix(nu)``.  Note that this is the *negative* of the
usual hat map.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial.transform import Rotation

from .errors import DegenerateConfiguration, PositivityViolation

ORTHO_TOL = 1e-10
RENORM_TOL = 1e-9


class RotationMatrix:
    """Proper orthogonal 3x3 matrix.

    Parameters
    ----------
    m : array_like, shape (3, 3)
    check : bool
        Verify orthogonality and ``det == +1`` to within ``ORTHO_TOL``.
    """

    __slots__ = ("_m",)

    def __init__(self, m, check=True):
        m = np.array(m, dtype=float)
        if m.shape != (3, 3):
            raise ValueError(f"rotation matrix must be 3x3, got shape {m.shape}")
        if check:
            defect = orthogonality_defect(m)
            if defect > ORTHO_TOL:
                raise ValueError(f"matrix is not orthogonal (defect {defect:.3e})")
            if abs(np.linalg.det(m) - 1.0) > ORTHO_TOL:
                raise ValueError("matrix is not a proper rotation (det != +1)")
        m.setflags(write=False)
        self._m = m

    @property
    def m(self) -> np.ndarray:
        return self._m

    @classmethod
    def identity(cls) -> "RotationMatrix":
        return cls(np.eye(3), check=False)

    @classmethod
    def from_rotvec(cls, k) -> "RotationMatrix":
        """Exponential map of a rotation vector (axis times angle)."""
        return cls(Rotation.from_rotvec(np.asarray(k, dtype=float)).as_matrix(), check=False)

    @classmethod
    def nearest(cls, m) -> "RotationMatrix":
        """Closest rotation in the Frobenius norm (orthogonal polar factor)."""
        return cls(project_to_rotation(m), check=False)

    def as_rotvec(self) -> np.ndarray:
        return Rotation.from_matrix(self._m).as_rotvec()

    def inv(self) -> "RotationMatrix":
        return RotationMatrix(self._m.T, check=False)

    def __matmul__(self, other):
        if isinstance(other, RotationMatrix):
            return RotationMatrix(self._m @ other._m, check=False)
        return self._m @ other

    def __array__(self, dtype=None, copy=None):
        return np.array(self._m, dtype=dtype)

    def __repr__(self):
        return f"RotationMatrix({self._m.tolist()!r})"


def orthogonality_defect(m) -> float:
    """Max-norm of ``m^T m - I``."""
    m = np.asarray(m, dtype=float)
    return float(np.max(np.abs(m.T @ m - np.eye(3))))


def project_to_rotation(m) -> np.ndarray:
    """Nearest proper rotation to ``m`` via the SVD (symmetric orthogonalization)."""
    w, _, vt = np.linalg.svd(np.asarray(m, dtype=float))
    r = w @ vt
    if np.linalg.det(r) < 0.0:
        w[:, -1] *= -1.0
        r = w @ vt
    return r


def u_theta(theta: float) -> np.ndarray:
    """In-plane rotation ``U(theta)`` (the inverse of the displayed ``U^-1``)."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


@dataclass(frozen=True)
class PolarDeformation:
    """Symmetric stretch ``S`` of the polar decomposition.

    ``xi``, ``zeta`` and ``rho`` must be positive and ``xi*zeta - alpha**2``
    must be positive, otherwise :class:`PositivityViolation` is raised.
    """

    alpha: float
    xi: float
    zeta: float
    rho: float

    def __post_init__(self):
        check_polar_domain(self.alpha, self.xi, self.zeta, self.rho)

    @classmethod
    def identity(cls, rho: float = 1.0) -> "PolarDeformation":
        return cls(0.0, 1.0, 1.0, rho)

    @property
    def plane_det(self) -> float:
        """``xi*zeta - alpha**2``, the determinant of the in-plane block."""
        return self.xi * self.zeta - self.alpha**2

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.xi, self.alpha, 0.0], [self.alpha, self.zeta, 0.0], [0.0, 0.0, self.rho]]
        )

    def as_tuple(self):
        return (self.alpha, self.xi, self.zeta, self.rho)


def check_polar_domain(alpha, xi, zeta, rho):
    if not (xi > 0.0 and zeta > 0.0 and rho > 0.0):
        raise PositivityViolation(
            f"xi, zeta, rho must be positive (xi={xi!r}, zeta={zeta!r}, rho={rho!r})"
        )
    if not xi * zeta - alpha**2 > 0.0:
        raise PositivityViolation(
            f"xi*zeta - alpha**2 must be positive (got {xi * zeta - alpha**2!r})"
        )


@dataclass(frozen=True)
class TwoPolarDeformation:
    """Diagonal stretches ``lam, mu, rho`` and material angle ``theta``."""

    lam: float
    mu: float
    rho: float
    theta: float = 0.0

    def __post_init__(self):
        if not (self.lam > 0.0 and self.mu > 0.0 and self.rho > 0.0):
            raise PositivityViolation(
                f"lam, mu, rho must be positive (got {self.lam!r}, {self.mu!r}, {self.rho!r})"
            )


@dataclass(frozen=True)
class TwoPolarState:
    R: RotationMatrix
    deformation: TwoPolarDeformation

    @property
    def matrix(self) -> np.ndarray:
        d = self.deformation
        return self.R.m @ np.diag([d.lam, d.mu, d.rho]) @ u_theta(d.theta).T


@dataclass(frozen=True)
class GreenTensor:
    g11: float
    g12: float
    g22: float
    g33: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array(
            [[self.g11, self.g12, 0.0], [self.g12, self.g22, 0.0], [0.0, 0.0, self.g33]]
        )

    def as_tuple(self):
        return (self.g11, self.g12, self.g22, self.g33)


@dataclass(frozen=True)
class DeformationInvariants:
    """Eigenvalues of the Green tensor, ordered ``k1 >= k2``; ``k3 = rho**2``."""

    k1: float
    k2: float
    k3: float

    def as_tuple(self):
        return (self.k1, self.k2, self.k3)


@dataclass(frozen=True)
class SpinVector:
    nu1: float = 0.0
    nu2: float = 0.0
    nu3: float = 0.0

    def as_array(self) -> np.ndarray:
        return np.array([self.nu1, self.nu2, self.nu3])

    @property
    def matrix(self) -> np.ndarray:
        return spin_matrix(self.as_array())

    @classmethod
    def from_matrix(cls, w) -> "SpinVector":
        return cls(*spin_vector(w))


def spin_matrix(nu) -> np.ndarray:
    """Antisymmetric matrix of an angular-velocity vector (module convention)."""
    n1, n2, n3 = nu
    return np.array([[0.0, n3, -n2], [-n3, 0.0, n1], [n2, -n1, 0.0]])


def spin_vector(w) -> np.ndarray:
    """Inverse of :func:`spin_matrix`; the symmetric part of ``w`` is discarded."""
    w = np.asarray(w, dtype=float)
    a = 0.5 * (w - w.T)
    return np.array([a[1, 2], a[2, 0], a[0, 1]])


def kl_embed(phi_plane, ell: float) -> np.ndarray:
    """Complete a 3x2 in-plane immersion to a Kirchhoff-Love configuration.

    The third column is ``ell * (c1 x c2)``.
    """
    phi_plane = np.asarray(phi_plane, dtype=float)
    if phi_plane.shape != (3, 2):
        raise ValueError(f"phi_plane must be 3x2, got shape {phi_plane.shape}")
    normal = np.cross(phi_plane[:, 0], phi_plane[:, 1])
    if np.linalg.norm(normal) < 1e-12:
        raise DegenerateConfiguration("in-plane columns are linearly dependent")
    return np.column_stack([phi_plane, ell * normal])


def ell_polar(deformation: PolarDeformation) -> float:
    det2 = deformation.plane_det
    if det2 <= 0.0:
        raise PositivityViolation(f"xi*zeta - alpha**2 = {det2!r} is not positive")
    return deformation.rho / det2


def ell_two_polar(deformation: TwoPolarDeformation) -> float:
    return deformation.rho / (deformation.lam * deformation.mu)


def polar_from_two_polar(state: TwoPolarState):
    """Convert ``(R; lam, mu, rho; theta)`` to ``(L; alpha, xi, zeta, rho)``.

    Returns
    -------
    L : RotationMatrix
        ``R U(theta)^-1``.
    deformation : PolarDeformation
    """
    d = state.deformation
    c, s = math.cos(d.theta), math.sin(d.theta)
    alpha = (d.lam - d.mu) * s * c
    xi = d.lam * c * c + d.mu * s * s
    zeta = d.lam * s * s + d.mu * c * c
    L = RotationMatrix(state.R.m @ u_theta(d.theta).T, check=False)
    return L, PolarDeformation(alpha, xi, zeta, d.rho)


def two_polar_from_polar(L: RotationMatrix, deformation: PolarDeformation) -> TwoPolarState:
    """Diagonalize the in-plane block of ``S``.

    Uses ``lam >= mu`` and ``theta`` in ``[0, pi)``; ``theta = 0`` when the
    block is a multiple of the identity.
    """
    alpha, xi, zeta, rho = deformation.as_tuple()
    half_gap = math.hypot(0.5 * (xi - zeta), alpha)
    mean = 0.5 * (xi + zeta)
    lam, mu = mean + half_gap, mean - half_gap
    if half_gap <= 1e-15 * mean:
        theta = 0.0
    else:
        theta = 0.5 * math.atan2(2.0 * alpha, xi - zeta)
        if theta < 0.0:
            theta += math.pi
        if theta >= math.pi:
            theta -= math.pi
    R = RotationMatrix(L.m @ u_theta(theta), check=False)
    return TwoPolarState(R, TwoPolarDeformation(lam, mu, rho, theta))


def configuration(L: RotationMatrix, deformation: PolarDeformation) -> np.ndarray:
    """``Phi = L S``."""
    return L.m @ deformation.matrix


def polar_decompose(phi, atol: float = 1e-10):
    """Split a Kirchhoff-Love configuration into ``(L, PolarDeformation)``.

    Raises ``ValueError`` when ``S`` couples the normal direction to the plane
    (i.e. ``phi`` does not respect the constraint in material axes).
    """
    phi = np.asarray(phi, dtype=float)
    if np.linalg.det(phi) <= 0.0:
        raise DegenerateConfiguration("configuration must have positive determinant")
    w, sig, vt = np.linalg.svd(phi)
    L = w @ vt
    S = vt.T @ np.diag(sig) @ vt
    if max(abs(S[0, 2]), abs(S[1, 2])) > atol * max(1.0, sig[0]):
        raise ValueError("stretch couples the normal direction to the central plane")
    return RotationMatrix(L, check=False), PolarDeformation(S[0, 1], S[0, 0], S[1, 1], S[2, 2])


def green_tensor(deformation: PolarDeformation) -> GreenTensor:
    alpha, xi, zeta, rho = deformation.as_tuple()
    return GreenTensor(xi * xi + alpha * alpha, (xi + zeta) * alpha, zeta * zeta + alpha * alpha, rho * rho)


def deformation_invariants(deformation: PolarDeformation) -> DeformationInvariants:
    alpha, xi, zeta, rho = deformation.as_tuple()
    trace = xi * xi + zeta * zeta + 2.0 * alpha * alpha
    k1 = 0.5 * (trace + (xi + zeta) * math.sqrt((xi - zeta) ** 2 + 4.0 * alpha * alpha))
    # k2 from the product k1*k2 = det^2 avoids cancellation in the minus branch
    k2 = (xi * zeta - alpha * alpha) ** 2 / k1
    return DeformationInvariants(k1, k2, rho * rho)


def nu_from_omega_theta(omega: SpinVector, theta: float, theta_dot: float) -> SpinVector:
    """Angular velocity of ``L = R U^-1`` from that of ``R`` and the angle rate."""
    c, s = math.cos(theta), math.sin(theta)
    return SpinVector(
        omega.nu1 * c - omega.nu2 * s,
        omega.nu1 * s + omega.nu2 * c,
        omega.nu3 + theta_dot,
    )
