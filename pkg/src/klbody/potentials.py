"""Separated potentials ``V = V_plane(alpha, xi, zeta) + V_rho(rho)``.

All callables work on plain floats so they can sit inside the integrator's
inner loop.  ``v_plane`` returns ``(value, (d/dalpha, d/dxi, d/dzeta))`` and
``v_rho`` returns ``(value, d/drho)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .errors import DomainError


def v_rho_barrier(rho: float, a: float = 1.0, b: float = 1.0):
    """Out-of-plane potential ``a/rho + b*rho**2/2``.

    The first term blows up under compression, the second under stretching,
    so the potential is confining with its minimum at ``rho = (a/b)**(1/3)``.
    """
    if not rho > 0.0:
        raise DomainError(f"rho must be positive, got {rho!r}")
    return a / rho + 0.5 * b * rho * rho, -a / (rho * rho) + b * rho


def v_plane_harmonic(alpha: float, xi: float, zeta: float, c: float = 1.0):
    """``c/2 * [(xi-1)**2 + (zeta-1)**2 + 2*alpha**2]``, i.e. ``c/2 |S - I|_F^2``."""
    dx, dz = xi - 1.0, zeta - 1.0
    value = 0.5 * c * (dx * dx + dz * dz + 2.0 * alpha * alpha)
    return value, (2.0 * c * alpha, c * dx, c * dz)


def v_plane_invariant(alpha: float, xi: float, zeta: float, c: float = 1.0):
    """``c/2 * [(K1-1)**2 + (K2-1)**2]`` in the in-plane deformation invariants.

    Written through ``K1 + K2 = xi**2 + zeta**2 + 2 alpha**2`` and
    ``K1 K2 = (xi zeta - alpha**2)**2`` so the gradient stays smooth where
    ``K1 == K2``.
    """
    s = xi * xi + zeta * zeta + 2.0 * alpha * alpha
    d = xi * zeta - alpha * alpha
    p = d * d
    value = 0.5 * c * (s * s - 2.0 * p - 2.0 * s + 2.0)
    # dV/ds = c (s - 1); dV/dp = -c
    ds = c * (s - 1.0)
    return value, (
        ds * 4.0 * alpha + 4.0 * c * d * alpha,
        ds * 2.0 * xi - 2.0 * c * d * zeta,
        ds * 2.0 * zeta - 2.0 * c * d * xi,
    )


def _fd_gradient(fun, alpha, xi, zeta):
    grad = []
    args = [alpha, xi, zeta]
    for i, q in enumerate(args):
        h = 1e-7 * max(1.0, abs(q))
        up = list(args)
        dn = list(args)
        up[i] = q + h
        dn[i] = q - h
        grad.append((fun(*up) - fun(*dn)) / (2.0 * h))
    return tuple(grad)


PLANE_MODELS = {"harmonic": v_plane_harmonic, "invariant": v_plane_invariant}
RHO_MODELS = {"barrier": v_rho_barrier}


@dataclass(frozen=True)
class PotentialModel:
    """A separated potential with named positive parameters.

    Parameters
    ----------
    plane : str or callable
        ``"harmonic"`` or ``"invariant"``, or a callable
        ``f(alpha, xi, zeta, **params)``.  A user callable may return just the
        value, in which case the gradient is taken by central differences.
    rho : str or callable
        ``"barrier"`` or a callable ``g(rho, **params) -> (value, derivative)``.
    params : mapping
        Parameters ``a``, ``b`` (for ``V_rho``) and ``c`` (for ``V_plane``).
    """

    plane: str | Callable = "harmonic"
    rho: str | Callable = "barrier"
    params: Mapping[str, float] = field(default_factory=lambda: {"a": 1.0, "b": 1.0, "c": 1.0})

    def __post_init__(self):
        for key, value in self.params.items():
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0.0):
                raise ValueError(f"potential parameter {key!r} must be positive, got {value!r}")
        if isinstance(self.plane, str) and self.plane not in PLANE_MODELS:
            raise ValueError(f"unknown plane potential {self.plane!r}; choose from {sorted(PLANE_MODELS)}")
        if isinstance(self.rho, str) and self.rho not in RHO_MODELS:
            raise ValueError(f"unknown rho potential {self.rho!r}; choose from {sorted(RHO_MODELS)}")
        plane_fn = PLANE_MODELS[self.plane] if isinstance(self.plane, str) else self.plane
        rho_fn = RHO_MODELS[self.rho] if isinstance(self.rho, str) else self.rho
        plane_keys = ("c",) if isinstance(self.plane, str) else tuple(self.params)
        rho_keys = ("a", "b") if isinstance(self.rho, str) else tuple(self.params)
        object.__setattr__(self, "_plane_fn", plane_fn)
        object.__setattr__(self, "_rho_fn", rho_fn)
        object.__setattr__(self, "_plane_kw", {k: self.params[k] for k in plane_keys if k in self.params})
        object.__setattr__(self, "_rho_kw", {k: self.params[k] for k in rho_keys if k in self.params})

    def v_plane(self, alpha: float, xi: float, zeta: float):
        out = self._plane_fn(alpha, xi, zeta, **self._plane_kw)
        if isinstance(out, tuple):
            return out
        fun = lambda *q: self._plane_fn(*q, **self._plane_kw)  # noqa: E731
        return out, _fd_gradient(fun, alpha, xi, zeta)

    def v_rho(self, rho: float):
        return self._rho_fn(rho, **self._rho_kw)

    def value(self, alpha, xi, zeta, rho) -> float:
        return self.v_plane(alpha, xi, zeta)[0] + self.v_rho(rho)[0]

    @property
    def rho_star(self) -> float:
        """Minimizer of the barrier ``V_rho``, ``(a/b)**(1/3)``."""
        return (self.params["a"] / self.params["b"]) ** (1.0 / 3.0)
