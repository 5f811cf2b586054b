"""Time integration of the polar-variable Hamiltonian flow.

Fixed-step classical RK4 is the default.  ``rk45_adaptive`` advances each
``dt`` interval with an embedded Dormand-Prince pair (scipy's ``RK45``).
The rotation block is pulled back onto SO(3) every ``renorm_interval``
steps, and every accepted step is checked against the positive-definite
deformation domain.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .dynamics_polar import (
    DEFAULT_SPIN_BRACKET,
    STATE_SIZE,
    InertiaTensor,
    PhasePoint,
    flat_hamiltonian,
    flat_rhs,
)
from .errors import DomainError, PositivityViolation, SingularMassMatrix
from .kinematics import deformation_invariants, orthogonality_defect, project_to_rotation, PolarDeformation
from .potentials import PotentialModel

logger = logging.getLogger(__name__)

SCHEMES = ("rk4", "rk45_adaptive")


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 1e-3
    n_steps: int = 1000
    scheme: str = "rk4"
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    renorm_interval: int = 10
    sample_stride: int = 1
    spin_bracket: float = DEFAULT_SPIN_BRACKET

    def __post_init__(self):
        if not (self.dt > 0.0 and math.isfinite(self.dt)):
            raise ValueError(f"dt must be positive, got {self.dt!r}")
        if int(self.n_steps) != self.n_steps or self.n_steps <= 0:
            raise ValueError(f"n_steps must be a positive integer, got {self.n_steps!r}")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if not (self.rel_tol > 0.0 and self.abs_tol > 0.0):
            raise ValueError("rel_tol and abs_tol must be positive")
        if int(self.renorm_interval) != self.renorm_interval or self.renorm_interval < 1:
            raise ValueError(f"renorm_interval must be a positive integer, got {self.renorm_interval!r}")
        if int(self.sample_stride) != self.sample_stride or self.sample_stride < 1:
            raise ValueError(f"sample_stride must be a positive integer, got {self.sample_stride!r}")
        if self.spin_bracket not in (-1.0, 1.0):
            raise ValueError("spin_bracket must be -1 or +1")


@dataclass
class Trajectory:
    """Sampled phase points with conserved-quantity monitors.

    Samples are stored as arrays; indexing returns :class:`PhasePoint`.
    """

    times: np.ndarray
    states: np.ndarray
    energy: np.ndarray
    spin_norm2: np.ndarray
    invariants: np.ndarray
    ortho_defect: np.ndarray
    failed: bool = False
    failure: str | None = None
    n_steps_taken: int = 0

    def __len__(self):
        return len(self.times)

    def __getitem__(self, i) -> PhasePoint:
        return PhasePoint.from_array(self.states[i], self.times[i], check=False)

    @property
    def points(self):
        return [self[i] for i in range(len(self))]

    def green_tensors(self) -> np.ndarray:
        """Rows ``(g11, g12, g22, g33)`` per sample."""
        a, x, z, r = self.states[:, 9:13].T
        return np.column_stack([x * x + a * a, (x + z) * a, z * z + a * a, r * r])

    def relative_energy_drift(self) -> np.ndarray:
        h0 = self.energy[0]
        return np.abs(self.energy - h0) / max(abs(h0), np.finfo(float).tiny)


class _TrajectoryBuilder:
    def __init__(self, J, pot):
        self.J, self.pot = J, pot
        self.t, self.y, self.h, self.s2, self.k, self.od = [], [], [], [], [], []

    def record(self, t, y):
        arr = np.asarray(y, dtype=float)
        self.t.append(t)
        self.y.append(arr)
        self.h.append(flat_hamiltonian(y, self.J, self.pot))
        self.s2.append(y[13] ** 2 + y[14] ** 2 + y[15] ** 2)
        self.k.append(deformation_invariants(PolarDeformation(*y[9:13])).as_tuple())
        self.od.append(orthogonality_defect(arr[:9].reshape(3, 3)))

    def build(self, failure, n_steps):
        return Trajectory(
            np.array(self.t), np.array(self.y).reshape(-1, STATE_SIZE), np.array(self.h),
            np.array(self.s2), np.array(self.k).reshape(-1, 3), np.array(self.od),
            failure is not None, failure, n_steps,
        )


def _check_domain(y):
    alpha, xi, zeta, rho = y[9], y[10], y[11], y[12]
    if not (xi > 0.0 and zeta > 0.0 and rho > 0.0 and xi * zeta - alpha * alpha > 0.0):
        raise PositivityViolation(
            f"step left the valid domain (alpha={alpha:.6g}, xi={xi:.6g}, zeta={zeta:.6g}, rho={rho:.6g}); "
            "reduce dt or check the potential"
        )
    # nan/inf anywhere propagates into the sum
    if not math.isfinite(sum(y)):
        raise PositivityViolation("non-finite state after step; reduce dt")


def _rk4(y, h, J, pot, sb):
    k1 = flat_rhs(y, J, pot, sb)
    hh = 0.5 * h
    k2 = flat_rhs([a + hh * b for a, b in zip(y, k1)], J, pot, sb)
    k3 = flat_rhs([a + hh * b for a, b in zip(y, k2)], J, pot, sb)
    k4 = flat_rhs([a + h * b for a, b in zip(y, k3)], J, pot, sb)
    h6 = h / 6.0
    return [a + h6 * (b + 2.0 * (c + d) + e) for a, b, c, d, e in zip(y, k1, k2, k3, k4)]


def _rk45(y, h, cfg, J, pot):
    # autonomous system: integrate over (0, h) so the span is exactly h
    sol = solve_ivp(
        lambda _t, v: flat_rhs(v.tolist(), J, pot, cfg.spin_bracket),
        (0.0, h), np.asarray(y, dtype=float), method="RK45",
        rtol=cfg.rel_tol, atol=cfg.abs_tol, first_step=h,
    )
    if not sol.success:
        raise PositivityViolation(f"adaptive step failed: {sol.message}")
    return sol.y[:, -1].tolist()


def _renormalize(y):
    r = project_to_rotation(np.asarray(y[:9]).reshape(3, 3))
    return r.ravel().tolist() + list(y[9:])


def _advance(y, cfg, J, pot, renorm):
    try:
        if cfg.scheme == "rk4":
            y = _rk4(y, cfg.dt, J, pot, cfg.spin_bracket)
        else:
            y = _rk45(y, cfg.dt, cfg, J, pot)
    except (DomainError, SingularMassMatrix, OverflowError, ZeroDivisionError) as exc:
        raise PositivityViolation(f"step left the valid domain: {exc}") from exc
    _check_domain(y)
    if renorm:
        y = _renormalize(y)
    return y


def step(p: PhasePoint, cfg: IntegratorConfig, J: InertiaTensor, pot: PotentialModel,
         index: int = 0) -> PhasePoint:
    """Advance a phase point by ``cfg.dt``.

    ``index`` is the zero-based step counter; ``L`` is reprojected when
    ``index + 1`` is a multiple of ``cfg.renorm_interval``.
    """
    renorm = (index + 1) % cfg.renorm_interval == 0
    y = _advance(p.to_array().tolist(), cfg, J, pot, renorm)
    return PhasePoint.from_array(y, p.t + cfg.dt, check=False)


def simulate(p0: PhasePoint, cfg: IntegratorConfig, J: InertiaTensor, pot: PotentialModel) -> Trajectory:
    """Integrate ``cfg.n_steps`` steps from ``p0``.

    A domain exit does not raise: the trajectory up to the last good sample
    is returned with ``failed`` set and the reason in ``failure``.
    """
    y = p0.to_array().tolist()
    t0 = p0.t
    out = _TrajectoryBuilder(J, pot)
    out.record(t0, y)
    failure = None
    n = int(cfg.n_steps)
    taken = 0
    for i in range(n):
        try:
            y = _advance(y, cfg, J, pot, (i + 1) % cfg.renorm_interval == 0)
        except PositivityViolation as exc:
            failure = str(exc)
            logger.error("integration stopped at step %d: %s", i, exc)
            break
        taken = i + 1
        if taken % cfg.sample_stride == 0 or taken == n:
            out.record(t0 + taken * cfg.dt, y)
    logger.info("simulated %d/%d steps", taken, n)
    return out.build(failure, taken)
