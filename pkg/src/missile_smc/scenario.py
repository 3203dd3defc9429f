"""
Scenario bundle and its sectioned key/value file format.

Angles are degrees in the file and radians everywhere else.  Every key is
optional; omitted keys take the built-in defaults.  Unknown sections or
keys are errors.

Example::

    [smc]
    k_tvc = 0.32
    k_elev = 0.66

    [sim]
    theta_command_deg = 35
"""

from __future__ import annotations

import configparser
import dataclasses
import io
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

from .actuation import ActuatorConfig
from .controller import SmcConfig, eta_bound
from .dynamics import (FlightProfiles, MissileParams, PlantState, UncertaintyBounds,
                       UncertaintyRealization)
from .sensing import FilterConfig, GyroConfig


# AOA used when sizing the switching gain from the uncertainty bounds
ETA_ALPHA_MAX = math.radians(20.0)


# plant-side uncertainty used unless a scenario overrides it: 10 % loss of
# static margin and half a degree of nozzle misalignment
DEFAULT_REALIZATION = UncertaintyRealization(delta_cm_alpha=0.1 * 5.5313,
                                             delta_nozzle=math.radians(0.5))


class ScenarioError(ValueError):
    """Raised for unreadable, unknown or invalid scenario entries."""


@dataclass(frozen=True)
class SimConfig:
    """Closed-loop run settings.

    ``time_varying`` switches the thrust/mass/CG schedules and the
    aerodynamic/nozzle/mass uncertainties on or off together.
    ``actuator_model`` is ``"limited"`` (second-order with limits) or
    ``"ideal"`` (deflection equals command).
    """

    dt_plant: float = 1e-3
    controller_rate: float = 200.0
    duration: float = 10.0
    theta_command: float = math.radians(35.0)
    initial_state: PlantState = field(default_factory=PlantState)
    seed: int = 0
    compensator: bool = True
    time_varying: bool = True
    actuator_model: str = "limited"

    def __post_init__(self):
        if not (math.isfinite(self.dt_plant) and self.dt_plant > 0):
            raise ValueError(f"SimConfig.dt_plant must be positive, got {self.dt_plant!r}")
        if not (math.isfinite(self.controller_rate) and self.controller_rate > 0):
            raise ValueError(f"SimConfig.controller_rate must be positive, got {self.controller_rate!r}")
        if not (math.isfinite(self.duration) and self.duration > 0):
            raise ValueError(f"SimConfig.duration must be positive, got {self.duration!r}")
        ratio = 1.0 / (self.controller_rate * self.dt_plant)
        if ratio < 1 or abs(ratio - round(ratio)) > 1e-9 * ratio:
            raise ValueError("SimConfig.controller_rate must divide evenly into 1/dt_plant")
        if self.actuator_model not in ("limited", "ideal"):
            raise ValueError(f"SimConfig.actuator_model must be 'limited' or 'ideal', got {self.actuator_model!r}")
        if not math.isfinite(self.theta_command):
            raise ValueError("SimConfig.theta_command must be finite")

    @property
    def substeps(self) -> int:
        return int(round(1.0 / (self.controller_rate * self.dt_plant)))

    @property
    def controller_dt(self) -> float:
        return 1.0 / self.controller_rate


@dataclass(frozen=True)
class Scenario:
    missile: MissileParams = field(default_factory=MissileParams)
    profiles: FlightProfiles = field(default_factory=FlightProfiles)
    uncertainty: UncertaintyBounds = field(default_factory=UncertaintyBounds)
    realization: UncertaintyRealization = field(default_factory=lambda: DEFAULT_REALIZATION)
    smc: SmcConfig = field(default_factory=SmcConfig)
    nozzle: ActuatorConfig = field(default_factory=ActuatorConfig.nozzle)
    elevator: ActuatorConfig = field(default_factory=ActuatorConfig.elevator)
    gyro: GyroConfig = field(default_factory=GyroConfig)
    filter: FilterConfig = field(default_factory=FilterConfig)
    sim: SimConfig = field(default_factory=SimConfig)

    def __post_init__(self):
        if not 0.0 < self.profiles.cg_initial < self.missile.l:
            raise ValueError("FlightProfiles.cg_initial must lie inside the airframe (0, l)")

    def replace(self, **sections) -> "Scenario":
        """Copy with whole sections or ``section__field`` entries replaced.

        >>> Scenario().replace(smc__k_tvc=0.5).smc.k_tvc
        0.5
        """
        updates = {}
        nested: dict[str, dict] = {}
        for key, value in sections.items():
            if "__" in key:
                sec, name = key.split("__", 1)
                nested.setdefault(sec, {})[name] = value
            else:
                updates[key] = value
        for sec, kw in nested.items():
            base = updates.get(sec, getattr(self, sec))
            updates[sec] = dataclasses.replace(base, **kw)
        return dataclasses.replace(self, **updates)

    def auto_eta(self) -> float:
        """Switching gain from the uncertainty bounds at the nozzle deflection limit."""
        return eta_bound(self.missile, self.profiles, self.uncertainty, ETA_ALPHA_MAX,
                         self.nozzle.max_deflection)

    def resolved_smc(self) -> SmcConfig:
        if self.smc.eta is not None:
            return self.smc
        return dataclasses.replace(self.smc, eta=self.auto_eta())


def paper_default() -> Scenario:
    return Scenario()


# ---------------------------------------------------------------------------
# File format
# ---------------------------------------------------------------------------

_deg = (lambda text: math.radians(float(text)), math.degrees)


def _opt_float(text):
    if text is None or str(text).strip().lower() == "auto":
        return None
    return float(text)


def _opt_out(value):
    return "auto" if value is None else float(value)


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# section -> {file key: (attribute path, to_internal, to_file)}
_SCHEMA: dict[str, dict[str, tuple]] = {
    "missile": {name: (("missile", name), float, float)
                for name in ("v_m", "m0", "i_yy", "c_m_alpha0", "c_m_deltaT0", "c_z_alpha0",
                             "c_z_deltaT0", "qbar", "s_ref", "d", "l")},
    "profiles": {name: (("profiles", name), float, float)
                 for name in ("t_ignition", "t_burn", "mass_fraction_final", "cg_initial",
                              "cg_fraction_final", "thrust_boost", "thrust_sustain")},
    "uncertainty": {
        "delta_cm_alpha_max": (("uncertainty", "delta_cm_alpha_max"), float, float),
        "delta_thrust_max": (("uncertainty", "delta_thrust_max"), float, float),
        "delta_cg_max": (("uncertainty", "delta_cg_max"), float, float),
        "delta_nozzle_max_deg": (("uncertainty", "delta_nozzle_max"), *_deg),
        "lumped_mass_term_max": (("uncertainty", "lumped_mass_term_max"), float, float),
        "cm_alpha_error": (("realization", "delta_cm_alpha"), float, float),
        "nozzle_misalignment_deg": (("realization", "delta_nozzle"), *_deg),
    },
    "smc": {
        "c": (("smc", "c"), float, float),
        "eta": (("smc", "eta"), _opt_float, _opt_out),
        "boundary_layer": (("smc", "boundary_layer"), float, float),
        "k_tvc": (("smc", "k_tvc"), float, float),
        "k_elev": (("smc", "k_elev"), float, float),
    },
    "gyro": {name: (("gyro", name), float, float) for name in ("arw", "sample_rate")},
    "filter": {name: (("filter", name), float, float) for name in ("cutoff_hz", "zeta")},
    "sim": {
        "dt_plant": (("sim", "dt_plant"), float, float),
        "controller_rate": (("sim", "controller_rate"), float, float),
        "duration": (("sim", "duration"), float, float),
        "theta_command_deg": (("sim", "theta_command"), *_deg),
        "seed": (("sim", "seed"), int, int),
        "compensator": (("sim", "compensator"), _bool, bool),
        "time_varying": (("sim", "time_varying"), _bool, bool),
        "actuator_model": (("sim", "actuator_model"), str, str),
        "alpha0_deg": (("sim", "initial_state", "alpha"), *_deg),
        "q0_deg_s": (("sim", "initial_state", "q"), *_deg),
        "theta0_deg": (("sim", "initial_state", "theta"), *_deg),
    },
}
for _act in ("nozzle", "elevator"):
    _SCHEMA[_act] = {
        "max_deflection_deg": ((_act, "max_deflection"), *_deg),
        "bandwidth_hz": ((_act, "bandwidth_hz"), float, float),
        "slew_rate_deg_s": ((_act, "slew_rate"), *_deg),
        "damping_ratio": ((_act, "damping_ratio"), float, float),
        "compensator_n": ((_act, "compensator_n"), float, float),
    }


def _key_line(text: str, section: str, key: str) -> int | None:
    current = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        m = re.match(r"\[(.+)\]$", stripped)
        if m:
            current = m.group(1).strip()
        elif current == section and re.match(rf"{re.escape(key)}\s*[=:]", stripped, re.IGNORECASE):
            return lineno
    return None


def _section_line(text: str, section: str) -> int | None:
    for lineno, line in enumerate(text.splitlines(), start=1):
        if line.strip() == f"[{section}]":
            return lineno
    return None


def _get(obj, path):
    for name in path:
        obj = getattr(obj, name)
    return obj


def parse_scenario(text: str, source: str = "<string>") -> Scenario:
    """Parse scenario text; see module docstring for the format."""
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        lineno = getattr(exc, "lineno", None)
        if lineno is None and getattr(exc, "errors", None):
            lineno = exc.errors[0][0]
        where = f"{source}:{lineno}" if lineno else source
        raise ScenarioError(f"{where}: parse error: {exc.message if hasattr(exc, 'message') else exc}") from exc

    values: dict[tuple, object] = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ScenarioError(f"{source}:{_section_line(text, section)}: unknown section [{section}]")
        for key, raw in parser.items(section):
            lineno = _key_line(text, section, key)
            if key not in _SCHEMA[section]:
                raise ScenarioError(f"{source}:{lineno}: unknown key {key!r} in [{section}]")
            path, to_internal, _ = _SCHEMA[section][key]
            try:
                values[path] = to_internal(raw)
            except ValueError as exc:
                raise ScenarioError(f"{source}:{lineno}: bad value for {section}.{key}: {exc}") from exc

    grouped: dict[str, dict] = {}
    state_kw: dict[str, float] = {}
    for path, value in values.items():
        if path[:2] == ("sim", "initial_state"):
            state_kw[path[2]] = value
        else:
            grouped.setdefault(path[0], {})[path[1]] = value

    sections = {}
    try:
        missile = MissileParams(**grouped.get("missile", {}))
        profile_kw = grouped.get("profiles", {})
        if "cg_initial" not in profile_kw:
            profile_kw["cg_initial"] = missile.l / 2.0
        sections["missile"] = missile
        sections["profiles"] = FlightProfiles(**profile_kw)
        sections["uncertainty"] = UncertaintyBounds(**grouped.get("uncertainty", {}))
        sections["realization"] = dataclasses.replace(DEFAULT_REALIZATION, **grouped.get("realization", {}))
        sections["smc"] = SmcConfig(**grouped.get("smc", {}))
        sections["nozzle"] = ActuatorConfig.nozzle(**grouped.get("nozzle", {}))
        sections["elevator"] = ActuatorConfig.elevator(**grouped.get("elevator", {}))
        sections["gyro"] = GyroConfig(**grouped.get("gyro", {}))
        sections["filter"] = FilterConfig(**grouped.get("filter", {}))
        sim_kw = grouped.get("sim", {})
        if state_kw:
            sim_kw["initial_state"] = PlantState(**state_kw)
        sections["sim"] = SimConfig(**sim_kw)
        return Scenario(**sections)
    except ValueError as exc:
        raise ScenarioError(f"{source}: invalid scenario: {exc}") from exc


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"{path}: cannot read scenario: {exc}") from exc
    return parse_scenario(text, source=str(path))


def dump_scenario(scenario: Scenario) -> str:
    """Serialise every key; ``parse_scenario(dump_scenario(s)) == s``."""
    out = io.StringIO()
    for section, keys in _SCHEMA.items():
        out.write(f"[{section}]\n")
        for key, (path, _, to_file) in keys.items():
            value = to_file(_get(scenario, path))
            if isinstance(value, bool):
                text = "true" if value else "false"
            elif isinstance(value, float):
                text = repr(value)
            else:
                text = str(value)
            out.write(f"{key} = {text}\n")
        out.write("\n")
    return out.getvalue()
