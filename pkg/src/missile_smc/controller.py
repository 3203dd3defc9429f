"""Saturated sliding-mode pitch autopilot with a two-effector split."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .dynamics import FlightProfiles, MissileParams, UncertaintyBounds


@dataclass(frozen=True)
class SmcConfig:
    """Sliding-mode controller constants.

    Attributes
    ----------
    c : float
        Sliding surface slope [1/s].
    eta : float or None
        Switching gain [rad/s^2]; ``None`` means "derive from the
        uncertainty bounds" (resolved by :class:`~missile_smc.scenario.Scenario`).
    boundary_layer : float
        Width of the linear band of the saturation function.
    k_tvc, k_elev : float
        Fraction of the commanded pitch acceleration routed to the nozzle
        and to the tail, in [0, 1].
    """

    c: float = 10.0
    eta: Optional[float] = None
    boundary_layer: float = 0.05
    k_tvc: float = 0.32
    k_elev: float = 0.66

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0):
            raise ValueError(f"SmcConfig.c must be positive, got {self.c!r}")
        if self.eta is not None and not (math.isfinite(self.eta) and self.eta >= 0):
            raise ValueError(f"SmcConfig.eta must be >= 0, got {self.eta!r}")
        if not (math.isfinite(self.boundary_layer) and self.boundary_layer > 0):
            raise ValueError(f"SmcConfig.boundary_layer must be positive, got {self.boundary_layer!r}")
        for name in ("k_tvc", "k_elev"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"SmcConfig.{name} must lie in [0, 1], got {value!r}")


@dataclass(frozen=True)
class ControlCommand:
    delta_n_cmd: float
    delta_t_cmd: float
    s_value: float
    u_raw: float


def sliding_surface(cfg: SmcConfig, e: float, e_dot: float) -> float:
    """``s = e_dot + c e`` with ``e = theta_d - theta``."""
    return e_dot + cfg.c * e


def sat(s: float, delta: float) -> float:
    """Saturation switching function: ``s/delta`` clipped to [-1, 1]."""
    if not delta > 0:
        raise ValueError(f"boundary layer must be positive, got {delta!r}")
    x = s / delta
    if x > 1.0:
        return 1.0
    if x < -1.0:
        return -1.0
    return x


def sign(s: float, delta: float = 1.0) -> float:
    """Discontinuous switching function, kept for chattering comparisons."""
    return math.copysign(1.0, s) if s != 0 else 0.0


def eta_terms(p: MissileParams, profiles: FlightProfiles, bounds: UncertaintyBounds,
              alpha_max: float, delta_n_max: float) -> tuple[float, float, float, float]:
    """Worst-case magnitude of each term of the lumped disturbance.

    Returns the aerodynamic, CG-shift, nozzle-misalignment and mass terms
    in that order.
    """
    thrust = profiles.design_thrust + bounds.delta_thrust_max
    aero = p.pitch_moment_scale * bounds.delta_cm_alpha_max * abs(alpha_max)
    cg_shift = thrust * bounds.delta_cg_max / p.i_yy * abs(delta_n_max)
    arm = abs(p.l - profiles.cg_initial) + bounds.delta_cg_max
    misalign = thrust / p.i_yy * arm * bounds.delta_nozzle_max
    return aero, cg_shift, misalign, bounds.lumped_mass_term_max


def eta_bound(p: MissileParams, profiles: FlightProfiles, bounds: UncertaintyBounds,
              alpha_max: float, delta_n_max: float) -> float:
    """Conservative upper bound on ``|D(t)|`` [rad/s^2]."""
    return sum(eta_terms(p, profiles, bounds, alpha_max, delta_n_max))


def smc_command(cfg: SmcConfig, f: float, g_n: float, g_t: float, theta_dd_d: float,
                e: float, e_dot: float, switching=sat) -> ControlCommand:
    """Evaluate the control law and split it across the two effectors.

    ``u_raw = -f + theta_dd_d + c e_dot + eta sat(s)`` is the pitch
    acceleration demanded from the effectors; each channel inverts its own
    effectiveness and scales by its gain.
    """
    if cfg.eta is None:
        raise ValueError("SmcConfig.eta is unresolved; use Scenario.resolved_smc()")
    if g_n == 0 or g_t == 0:
        raise ZeroDivisionError("vanishing control effectiveness (degenerate airframe)")
    s = sliding_surface(cfg, e, e_dot)
    u_raw = -f + theta_dd_d + cfg.c * e_dot + cfg.eta * switching(s, cfg.boundary_layer)
    return ControlCommand(
        delta_n_cmd=cfg.k_tvc * u_raw / g_n,
        delta_t_cmd=cfg.k_elev * u_raw / g_t,
        s_value=s,
        u_raw=u_raw,
    )
