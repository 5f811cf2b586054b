"""Affinely-rigid body with Kirchhoff-Love constraints.

Kinematics in polar and two-polar variables, the Hamiltonian flow in polar
variables, an RK4 integrator, and a solver for stationary rotations.
"""

from .dynamics_polar import (
    InertiaTensor,
    PhasePoint,
    PolarMomenta,
    PolarVelocities,
    eom_rhs,
    hamiltonian,
    legendre_forward,
    legendre_inverse,
)
from .errors import (
    DegenerateConfiguration,
    DegenerateDeformation,
    DomainError,
    KLBodyError,
    NoConvergence,
    PositivityViolation,
    SingularMassMatrix,
)
from .integrator import IntegratorConfig, Trajectory, simulate, step
from .kinematics import (
    PolarDeformation,
    RotationMatrix,
    SpinVector,
    TwoPolarDeformation,
    TwoPolarState,
    deformation_invariants,
    green_tensor,
    polar_from_two_polar,
    two_polar_from_polar,
)
from .potentials import PotentialModel
from .stationary import StationarySolution, solve_stationary, stationary_orbit

__version__ = "0.1.0"
