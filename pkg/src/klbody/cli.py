"""Command-line front end.

Exit codes: 0 success, 2 bad config or input, 3 integration left the valid
domain, 4 stationary solver did not converge.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import config as config_mod
from .dynamics_polar import hamiltonian
from .errors import KLBodyError, NoConvergence, PositivityViolation
from .integrator import IntegratorConfig, simulate
from .kinematics import (
    PolarDeformation,
    RotationMatrix,
    TwoPolarDeformation,
    TwoPolarState,
    deformation_invariants,
    ell_polar,
    ell_two_polar,
    polar_from_two_polar,
    two_polar_from_polar,
)
from .stationary import max_green_drift, max_spin_drift, solve_stationary

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_NO_CONVERGENCE = 4

CSV_COLUMNS = ("t", "alpha", "xi", "zeta", "rho", "pi1", "pi2", "pi3",
               "p_alpha", "p_xi", "p_zeta", "p_rho", "H", "K1", "K2", "K3",
               "orthogonality_defect")
VERIFY_TOL = 1e-6

logger = logging.getLogger("klbody")


def _fmt(x: float) -> str:
    return f"{x:.16e}"


def write_trajectory_csv(traj, stream, metadata=()):
    for line in metadata:
        stream.write(f"# {line}\n")
    stream.write(",".join(CSV_COLUMNS) + "\n")
    for i in range(len(traj)):
        y = traj.states[i]
        row = [traj.times[i], *y[9:20], traj.energy[i], *traj.invariants[i], traj.ortho_defect[i]]
        stream.write(",".join(_fmt(float(v)) for v in row) + "\n")
    if traj.failed:
        stream.write(f"# FAILED after {traj.n_steps_taken} steps: {traj.failure}\n")


def cmd_simulate(args) -> int:
    cfg = config_mod.load(args.config)
    stride = args.stride or cfg.stride
    integ = cfg.integrator
    if stride != integ.sample_stride:
        integ = IntegratorConfig(**{**integ.__dict__, "sample_stride": stride})
    traj = simulate(cfg.initial, integ, cfg.inertia, cfg.potential)
    meta = [
        f"config: {os.path.basename(cfg.source)}",
        f"inertia: {cfg.inertia.j1!r} {cfg.inertia.j2!r} {cfg.inertia.j3!r}",
        f"potential: plane={cfg.potential.plane} rho={cfg.potential.rho} "
        + " ".join(f"{k}={v!r}" for k, v in sorted(cfg.potential.params.items())),
        f"scheme: {integ.scheme} dt={integ.dt!r} n_steps={integ.n_steps} stride={stride}",
    ]
    out_path = args.output or cfg.output_path
    if out_path:
        with open(out_path, "w", newline="") as fh:
            write_trajectory_csv(traj, fh, meta)
    else:
        write_trajectory_csv(traj, sys.stdout, meta)
    drift = float(traj.relative_energy_drift().max())
    logger.info("max relative energy drift %.3e over %d samples", drift, len(traj))
    if traj.failed:
        print(f"error: integration left the valid domain: {traj.failure}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def cmd_stationary(args) -> int:
    cfg = config_mod.load(args.config)
    try:
        sol = solve_stationary(args.branch, args.spin, cfg.inertia, cfg.potential, cfg.guess,
                               pi_other=args.pi_other)
    except NoConvergence as exc:
        print(f"error: stationary solver did not converge: {exc}", file=sys.stderr)
        print(f"best residual norm: {exc.residual_norm:.6e}")
        return EXIT_NO_CONVERGENCE
    except PositivityViolation as exc:
        print(f"error: stationary solver left the valid domain: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE

    d, m = sol.deformation, sol.momenta
    nu = sol.angular_velocity(cfg.inertia)
    print(f"branch: {sol.branch}")
    print(f"deformation: alpha={_fmt(d.alpha)} xi={_fmt(d.xi)} zeta={_fmt(d.zeta)} rho={_fmt(d.rho)}")
    print("momenta: " + " ".join(f"{k}={_fmt(v)}" for k, v in zip(
        ("pi1", "pi2", "pi3", "p_alpha", "p_xi", "p_zeta", "p_rho"), m.as_tuple())))
    print(f"angular_velocity: nu1={_fmt(nu.nu1)} nu2={_fmt(nu.nu2)} nu3={_fmt(nu.nu3)}")
    print(f"energy: {_fmt(hamiltonian(d, m, cfg.inertia, cfg.potential))}")
    print(f"residual_norm: {sol.residual_norm:.6e}")
    print(f"iterations: {sol.iterations}")
    if args.verify:
        dt = cfg.integrator.dt
        n = max(1, int(round(cfg.t_verify / dt)))
        integ = IntegratorConfig(dt=dt, n_steps=n, scheme=cfg.integrator.scheme,
                                 rel_tol=cfg.integrator.rel_tol, abs_tol=cfg.integrator.abs_tol,
                                 renorm_interval=cfg.integrator.renorm_interval,
                                 sample_stride=max(1, n // 1000),
                                 spin_bracket=cfg.integrator.spin_bracket)
        traj = simulate(sol.phase_point(), integ, cfg.inertia, cfg.potential)
        if traj.failed:
            print(f"error: verification integration failed: {traj.failure}", file=sys.stderr)
            return EXIT_DOMAIN
        g_drift, s_drift = max_green_drift(traj), max_spin_drift(traj)
        print(f"verify_t: {_fmt(n * dt)}")
        print(f"max_green_drift: {g_drift:.6e}")
        print(f"max_spin_drift: {s_drift:.6e}")
        print(f"verified: {'yes' if max(g_drift, s_drift) < VERIFY_TOL else 'no'}")
    return EXIT_OK


def cmd_convert(args) -> int:
    values = args.values
    R = RotationMatrix.from_rotvec(args.rotvec) if args.rotvec else RotationMatrix.identity()
    if args.to == "polar":
        lam, mu, theta, rho = values
        state = TwoPolarState(R, TwoPolarDeformation(lam, mu, rho, theta))
        L, d = polar_from_two_polar(state)
        print(f"alpha={_fmt(d.alpha)} xi={_fmt(d.xi)} zeta={_fmt(d.zeta)} rho={_fmt(d.rho)}")
        print("L_rotvec=" + ",".join(_fmt(v) for v in L.as_rotvec()))
        ell = ell_two_polar(state.deformation)
    else:
        alpha, xi, zeta, rho = values
        d = PolarDeformation(alpha, xi, zeta, rho)
        state = two_polar_from_polar(R, d)
        t = state.deformation
        print(f"lam={_fmt(t.lam)} mu={_fmt(t.mu)} theta={_fmt(t.theta)} rho={_fmt(t.rho)}")
        print("R_rotvec=" + ",".join(_fmt(v) for v in state.R.as_rotvec()))
        ell = ell_polar(d)
    k = deformation_invariants(d)
    print(f"ell={_fmt(ell)}")
    print(f"K1={_fmt(k.k1)} K2={_fmt(k.k2)} K3={_fmt(k.k3)}")
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="klbody", description="Affine body with Kirchhoff-Love constraints.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="integrate a configuration and write a trajectory CSV")
    p.add_argument("config")
    p.add_argument("--output", "-o", help="CSV path (default: config output.path or stdout)")
    p.add_argument("--stride", type=int, help="write every n-th step")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("stationary", help="solve for a stationary rotation")
    p.add_argument("config")
    p.add_argument("--branch", type=int, choices=(1, 2, 3), required=True)
    p.add_argument("--spin", type=float, required=True,
                   help="pi1 (branch 1), pi2 (branch 2) or pi3 (branch 3)")
    p.add_argument("--pi-other", type=float, default=None,
                   help="hold the other in-plane spin fixed (branches 1-2)")
    p.add_argument("--verify", action="store_true",
                   help="integrate the solution and report Green-tensor and spin drift")
    p.set_defaults(func=cmd_stationary)

    p = sub.add_parser("convert", help="convert between polar and two-polar variables")
    p.add_argument("--to", choices=("polar", "two-polar"), required=True)
    p.add_argument("--rotvec", type=float, nargs=3, metavar=("KX", "KY", "KZ"),
                   help="rotation vector of R (to polar) or L (to two-polar)")
    p.add_argument("values", type=float, nargs=4,
                   help="LAM MU THETA RHO (to polar) or ALPHA XI ZETA RHO (to two-polar)")
    p.set_defaults(func=cmd_convert)
    return parser


def _configure_logging():
    level = os.environ.get("KLBODY_LOG", "error").strip().lower()
    levels = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.ERROR),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def main(argv=None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    if getattr(args, "stride", None) is not None and args.stride < 1:
        print("error: --stride must be a positive integer", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except config_mod.ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (KLBodyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
