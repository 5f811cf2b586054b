"""Damped Newton iteration with a domain-aware backtracking line search."""

from __future__ import annotations

import logging

import numpy as np

from .errors import NoConvergence, PositivityViolation

logger = logging.getLogger(__name__)


def fd_jacobian(fun, x, f0=None, rel_step=1e-6):
    """Central-difference Jacobian, step ``rel_step * max(1, |x_i|)``."""
    x = np.asarray(x, dtype=float)
    cols = []
    for i in range(x.size):
        h = rel_step * max(1.0, abs(x[i]))
        up, dn = x.copy(), x.copy()
        up[i] += h
        dn[i] -= h
        cols.append((np.asarray(fun(up)) - np.asarray(fun(dn))) / (2.0 * h))
    return np.column_stack(cols)


def damped_newton(fun, x0, valid=lambda x: True, tol=1e-10, max_iter=200, max_halvings=40):
    """Solve ``fun(x) = 0`` (least squares when overdetermined).

    Parameters
    ----------
    fun : callable
        Residual map; only called at points where ``valid(x)`` is true.
    x0 : array_like
        Starting point, must be valid.
    valid : callable
        Domain predicate.  Trial steps outside the domain are halved.
    tol : float
        Convergence threshold on the Euclidean residual norm.

    Returns
    -------
    x, residual_norm, n_iter

    Raises
    ------
    NoConvergence
        After ``max_iter`` iterations, or when the line search stalls.
    PositivityViolation
        When every trial step of an iteration leaves the domain.
    """
    x = np.array(x0, dtype=float)
    if not valid(x):
        raise PositivityViolation("initial guess is outside the valid domain")
    f = np.asarray(fun(x), dtype=float)
    norm = float(np.linalg.norm(f))
    for it in range(max_iter):
        if norm < tol:
            return x, norm, it
        jac = fd_jacobian(fun, x)
        dx = np.linalg.lstsq(jac, -f, rcond=None)[0]
        t = 1.0
        any_valid = False
        for _ in range(max_halvings):
            trial = x + t * dx
            if valid(trial):
                any_valid = True
                f_trial = np.asarray(fun(trial), dtype=float)
                n_trial = float(np.linalg.norm(f_trial))
                if np.isfinite(n_trial) and n_trial < norm:
                    break
            t *= 0.5
        else:
            if not any_valid:
                raise PositivityViolation(
                    f"Newton step left the valid domain at iteration {it} and backtracking could not recover"
                )
            raise NoConvergence(
                f"line search stalled at iteration {it} with residual {norm:.3e}", best=x, residual_norm=norm
            )
        x, f, norm = trial, f_trial, n_trial
        logger.debug("newton iter %d: |F| = %.3e, damping %.3g", it, norm, t)
    if norm < tol:
        return x, norm, max_iter
    raise NoConvergence(
        f"no convergence after {max_iter} iterations (residual {norm:.3e})", best=x, residual_norm=norm
    )
