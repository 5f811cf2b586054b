"""Independent reference computations shared by the test modules.

Nothing here calls the closed-form expressions under test.  Kinetic energies
come straight from ``1/2 Tr(J dPhi^T dPhi)`` and derivatives from central
differences.
"""

import numpy as np

from klbody.dynamics_polar import InertiaTensor, PolarMomenta, PolarVelocities, hamiltonian
from klbody.kinematics import PolarDeformation, TwoPolarDeformation, spin_matrix, u_theta
from klbody.potentials import PotentialModel

# documented sampling ranges for randomized checks
ALPHA_RANGE = (-0.4, 0.4)
STRETCH_RANGE = (0.5, 2.0)
RATE_RANGE = (-1.0, 1.0)
INERTIA_RANGE = (0.5, 2.0)
MIN_PLANE_DET = 0.05

J_TEST = InertiaTensor(1.0, 1.5, 0.8)
POT_TEST = PotentialModel("harmonic", "barrier", {"a": 1.0, "b": 1.0, "c": 1.0})

def random_deformation(rng):
    while True:
        alpha = rng.uniform(*ALPHA_RANGE)
        xi, zeta, rho = rng.uniform(*STRETCH_RANGE, size=3)
        if xi * zeta - alpha**2 > MIN_PLANE_DET:
            return PolarDeformation(float(alpha), float(xi), float(zeta), float(rho))

def random_inertia(rng):
    return InertiaTensor(*(float(v) for v in rng.uniform(*INERTIA_RANGE, size=3)))

def random_velocities(rng):
    return PolarVelocities.from_tuple(rng.uniform(*RATE_RANGE, size=7))

def random_momenta(rng):
    return PolarMomenta.from_tuple(rng.uniform(*RATE_RANGE, size=7))

def random_two_polar(rng):
    lam, mu, rho = rng.uniform(*STRETCH_RANGE, size=3)
    return TwoPolarDeformation(float(lam), float(mu), float(rho), float(rng.uniform(0.0, np.pi)))

def trace_energy(phi_dot, J):
    return 0.5 * float(np.trace(np.diag(J.as_tuple()) @ phi_dot.T @ phi_dot))

def polar_phi_dot(deformation, vel):
    """``dPhi/dt`` at ``L = 1`` with ``dL/dt = L spin_matrix(nu)``."""
    a_dot, x_dot, z_dot, r_dot = vel.alpha_dot, vel.xi_dot, vel.zeta_dot, vel.rho_dot
    s_dot = np.array([[x_dot, a_dot, 0.0], [a_dot, z_dot, 0.0], [0.0, 0.0, r_dot]])
    return spin_matrix(vel.nu.as_array()) @ deformation.matrix + s_dot

def polar_energy_oracle(deformation, vel, J):
    return trace_energy(polar_phi_dot(deformation, vel), J)

def two_polar_energy_oracle(deformation, omega, lam_dot, mu_dot, rho_dot, theta_dot, J):
    """``Phi = R D U(theta)^T`` differentiated by the product rule at ``R = 1``."""
    th = deformation.theta
    c, s = np.cos(th), np.sin(th)
    d_ut = theta_dot * np.array([[-s, c, 0.0], [-c, -s, 0.0], [0.0, 0.0, 0.0]])
    D = np.diag([deformation.lam, deformation.mu, deformation.rho])
    phi_dot = (spin_matrix(omega) @ D @ u_theta(th).T
               + np.diag([lam_dot, mu_dot, rho_dot]) @ u_theta(th).T
               + D @ d_ut)
    return trace_energy(phi_dot, J)

def mass_matrix(deformation, J):
    """7x7 kinetic-energy matrix by polarization of the trace formula."""
    basis = np.eye(7)

    def t(v):
        return polar_energy_oracle(deformation, PolarVelocities.from_tuple(v), J)

    M = np.empty((7, 7))
    for i in range(7):
        M[i, i] = 2.0 * t(basis[i])
        for j in range(i):
            M[i, j] = M[j, i] = t(basis[i] + basis[j]) - 0.5 * M[i, i] - 0.5 * M[j, j]
    return M

def fd_hamiltonian_gradient(deformation, mom, J, pot, h=1e-6):
    """Central differences of ``H`` in ``(alpha, xi, zeta, rho)`` and in the 7 momenta."""
    q = np.array(deformation.as_tuple())
    p = np.array(mom.as_tuple())

    def H(qq, pp):
        return hamiltonian(PolarDeformation(*qq.tolist()), PolarMomenta.from_tuple(pp), J, pot)

    dq = np.empty(4)
    for i in range(4):
        e = np.zeros(4)
        e[i] = h
        dq[i] = (H(q + e, p) - H(q - e, p)) / (2.0 * h)
    dp = np.empty(7)
    for i in range(7):
        e = np.zeros(7)
        e[i] = h
        dp[i] = (H(q, p + e) - H(q, p - e)) / (2.0 * h)
    return dq, dp

def poisson_spin_rate(mom, dH_dpi, sign):
    """``{pi_i, H}`` with ``{pi_i, pi_j} = sign * eps_ijk pi_k``."""
    return sign * np.cross(dH_dpi, mom.spin)

def rel_err(a, b):
    """Max-norm relative error, scaled by the reference vector."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))
