"""Flat ``section.key = value`` run configuration files.

Example::

    # inertia of the body
    inertia.j1 = 1.0
    inertia.j2 = 1.5
    inertia.j3 = 0.8

    potential.plane = harmonic
    potential.a = 1.0

    polar.xi = 1.1
    polar.rotvec = 0.1, 0.2, 0.3
    momenta.pi3 = 0.4

Exactly one of the ``polar.*`` / ``two_polar.*`` sections describes the
initial configuration.  Errors carry the line number of the offending key.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .dynamics_polar import InertiaTensor, PhasePoint, PolarMomenta
from .errors import KLBodyError
from .integrator import SCHEMES, IntegratorConfig
from .kinematics import (
    PolarDeformation,
    RotationMatrix,
    TwoPolarDeformation,
    TwoPolarState,
    polar_from_two_polar,
)
from .potentials import PLANE_MODELS, RHO_MODELS, PotentialModel


class ConfigError(KLBodyError):
    pass


FLOAT_KEYS = {
    "inertia.j1", "inertia.j2", "inertia.j3",
    "potential.a", "potential.b", "potential.c",
    "polar.alpha", "polar.xi", "polar.zeta", "polar.rho",
    "two_polar.lam", "two_polar.mu", "two_polar.rho", "two_polar.theta",
    "momenta.pi1", "momenta.pi2", "momenta.pi3",
    "momenta.p_alpha", "momenta.p_xi", "momenta.p_zeta", "momenta.p_rho",
    "integrator.dt", "integrator.rel_tol", "integrator.abs_tol", "integrator.spin_bracket",
    "stationary.t_verify", "stationary.guess_alpha", "stationary.guess_xi",
    "stationary.guess_zeta", "stationary.guess_rho",
}
INT_KEYS = {"integrator.n_steps", "integrator.renorm_interval", "output.stride"}
VECTOR_KEYS = {"polar.rotvec", "two_polar.rotvec"}
STR_KEYS = {"potential.plane", "potential.rho_model", "integrator.scheme", "output.path"}
POSITIVE_KEYS = {
    "inertia.j1", "inertia.j2", "inertia.j3", "potential.a", "potential.b", "potential.c",
    "polar.xi", "polar.zeta", "polar.rho", "two_polar.lam", "two_polar.mu", "two_polar.rho",
    "integrator.dt", "integrator.rel_tol", "integrator.abs_tol", "integrator.n_steps",
    "integrator.renorm_interval", "output.stride", "stationary.t_verify",
}
KNOWN_KEYS = FLOAT_KEYS | INT_KEYS | VECTOR_KEYS | STR_KEYS


def parse(text: str, source: str = "<config>") -> dict:
    """Parse config text into ``{key: (typed_value, line_number)}``."""
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"{source}:{lineno}"
        if "=" not in line:
            raise ConfigError(f"{where}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in KNOWN_KEYS:
            raise ConfigError(f"{where}: unknown key {key!r}")
        if key in entries:
            raise ConfigError(f"{where}: duplicate key {key!r} (first set on line {entries[key][1]})")
        entries[key] = (_convert(key, value, where), lineno)
    return entries


def _convert(key, value, where):
    try:
        if key in FLOAT_KEYS:
            out = float(value)
            if not math.isfinite(out):
                raise ValueError
        elif key in INT_KEYS:
            out = int(value)
        elif key in VECTOR_KEYS:
            out = tuple(float(v) for v in value.split(","))
            if len(out) != 3:
                raise ValueError
        else:
            out = value
    except ValueError:
        raise ConfigError(f"{where}: invalid value {value!r} for key {key!r}") from None
    if key in POSITIVE_KEYS and not out > 0:
        raise ConfigError(f"{where}: key {key!r} must be positive, got {value}")
    return out


@dataclass(frozen=True)
class RunConfig:
    inertia: InertiaTensor
    potential: PotentialModel
    initial: PhasePoint
    integrator: IntegratorConfig
    output_path: str | None = None
    stride: int = 1
    t_verify: float = 10.0
    guess: PolarDeformation | None = None
    source: str = "<config>"
    entries: dict = field(default_factory=dict, repr=False)


def load(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from None
    return from_text(text, str(path))


def from_text(text: str, source: str = "<config>") -> RunConfig:
    entries = parse(text, source)

    def get(key, default=None):
        return entries[key][0] if key in entries else default

    def anchored(key, message):
        line = entries[key][1] if key in entries else None
        where = f"{source}:{line}" if line else source
        return ConfigError(f"{where}: {message}")

    for key in ("inertia.j1", "inertia.j2", "inertia.j3"):
        if key not in entries:
            raise ConfigError(f"{source}: missing required key {key!r}")
    J = InertiaTensor(get("inertia.j1"), get("inertia.j2"), get("inertia.j3"))

    plane = get("potential.plane", "harmonic")
    if plane not in PLANE_MODELS:
        raise anchored("potential.plane", f"unknown plane potential {plane!r}; choose from {sorted(PLANE_MODELS)}")
    rho_model = get("potential.rho_model", "barrier")
    if rho_model not in RHO_MODELS:
        raise anchored("potential.rho_model", f"unknown rho potential {rho_model!r}")
    params = {k: get(f"potential.{k}", 1.0) for k in ("a", "b", "c")}
    pot = PotentialModel(plane, rho_model, params)

    initial = _initial_state(entries, get, anchored, source)

    scheme = get("integrator.scheme", "rk4")
    if scheme not in SCHEMES:
        raise anchored("integrator.scheme", f"scheme must be one of {SCHEMES}, got {scheme!r}")
    bracket = get("integrator.spin_bracket", -1.0)
    if bracket not in (-1.0, 1.0):
        raise anchored("integrator.spin_bracket", "spin_bracket must be -1 or 1")
    stride = get("output.stride", 1)
    integ = IntegratorConfig(
        dt=get("integrator.dt", 1e-3),
        n_steps=get("integrator.n_steps", 1000),
        scheme=scheme,
        rel_tol=get("integrator.rel_tol", 1e-10),
        abs_tol=get("integrator.abs_tol", 1e-12),
        renorm_interval=get("integrator.renorm_interval", 10),
        sample_stride=stride,
        spin_bracket=bracket,
    )

    guess = None
    guess_keys = [f"stationary.guess_{k}" for k in ("alpha", "xi", "zeta", "rho")]
    if any(k in entries for k in guess_keys):
        default = (0.0, 1.0, 1.0, pot.rho_star)
        values = [get(k, d) for k, d in zip(guess_keys, default)]
        try:
            guess = PolarDeformation(*values)
        except KLBodyError as exc:
            raise anchored(next(k for k in guess_keys if k in entries), f"invalid stationary guess: {exc}") from None

    return RunConfig(J, pot, initial, integ, get("output.path"), stride,
                     get("stationary.t_verify", 10.0), guess, source, entries)


def _initial_state(entries, get, anchored, source):
    has_polar = any(k.startswith("polar.") for k in entries)
    has_two = any(k.startswith("two_polar.") for k in entries)
    if has_polar and has_two:
        key = min((k for k in entries if k.startswith("two_polar.")), key=lambda k: entries[k][1])
        raise anchored(key, "give the initial state either as polar.* or as two_polar.*, not both")
    momenta = PolarMomenta(*(get(f"momenta.{k}", 0.0) for k in
                             ("pi1", "pi2", "pi3", "p_alpha", "p_xi", "p_zeta", "p_rho")))
    try:
        if has_two:
            R = RotationMatrix.from_rotvec(get("two_polar.rotvec", (0.0, 0.0, 0.0)))
            d = TwoPolarDeformation(get("two_polar.lam", 1.0), get("two_polar.mu", 1.0),
                                    get("two_polar.rho", 1.0), get("two_polar.theta", 0.0))
            L, deformation = polar_from_two_polar(TwoPolarState(R, d))
        else:
            L = RotationMatrix.from_rotvec(get("polar.rotvec", (0.0, 0.0, 0.0)))
            deformation = PolarDeformation(get("polar.alpha", 0.0), get("polar.xi", 1.0),
                                           get("polar.zeta", 1.0), get("polar.rho", 1.0))
    except KLBodyError as exc:
        prefix = "two_polar." if has_two else "polar."
        key = next((k for k in sorted(entries, key=lambda k: entries[k][1]) if k.startswith(prefix)), None)
        raise (anchored(key, f"invalid initial state: {exc}") if key else ConfigError(f"{source}: {exc}")) from None
    return PhasePoint(L, deformation, momenta, 0.0)
