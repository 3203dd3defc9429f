"""
Longitudinal pitch-plane dynamics of a boost-sustain missile.

State is ``[alpha, q, theta]``; inputs are the nozzle deflection ``delta_n``
and the tail deflection ``delta_t`` (both rad).

    alpha_dot = Z_a alpha + q + T/(m V) delta_n + Z_d delta_t
    q_dot     = M_a alpha + T0 (l - x_cg0)/I_yy delta_n + M_d delta_t   (nominal)
                + perturbation(dCm_a, dT, dx_cg, d_delta_n, mass term)

The nominal pitch model is what the autopilot is designed against (launch
values of thrust and centre of gravity).  The perturbation carries the
time-varying thrust and CG and the unmodelled terms; the controller never
sees it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields


def _require_positive(obj, names):
    for name in names:
        value = getattr(obj, name)
        if not (math.isfinite(value) and value > 0):
            raise ValueError(f"{type(obj).__name__}.{name} must be positive, got {value!r}")


@dataclass(frozen=True)
class MissileParams:
    """Static airframe and aerodynamic constants.

    Attributes
    ----------
    v_m : float
        Airspeed [m/s].
    m0 : float
        Launch mass [kg].
    i_yy : float
        Pitch moment of inertia [kg m^2].
    c_m_alpha0, c_m_deltaT0, c_z_alpha0, c_z_deltaT0 : float
        Pitch moment / normal force derivatives w.r.t. AOA and tail
        deflection [1/rad].
    qbar : float
        Dynamic pressure [Pa].
    s_ref : float
        Reference area [m^2].
    d, l : float
        Diameter and length [m].
    """

    v_m: float = 1021.0
    m0: float = 162.0
    i_yy: float = 187.0
    c_m_alpha0: float = -5.5313
    c_m_deltaT0: float = -6.6013
    c_z_alpha0: float = -1.2713
    c_z_deltaT0: float = -7.5368
    qbar: float = 638.5e3
    s_ref: float = 0.0507
    d: float = 0.2540
    l: float = 3.72

    def __post_init__(self):
        _require_positive(self, ("v_m", "m0", "i_yy", "qbar", "s_ref", "d", "l"))
        for f in fields(self):
            if not math.isfinite(getattr(self, f.name)):
                raise ValueError(f"MissileParams.{f.name} must be finite")

    @property
    def pitch_moment_scale(self) -> float:
        """``qbar * S_ref * d / I_yy`` [1/s^2 per unit coefficient]."""
        return self.qbar * self.s_ref * self.d / self.i_yy

    @property
    def m_alpha(self) -> float:
        return self.pitch_moment_scale * self.c_m_alpha0

    @property
    def m_delta_t(self) -> float:
        return self.pitch_moment_scale * self.c_m_deltaT0


@dataclass(frozen=True)
class FlightProfiles:
    """Thrust, mass and CG schedules.

    Mass and CG decay geometrically between ignition and burnout and are
    held at their final values afterwards.  ``thrust_boost`` is not given
    numerically by the source data; 30 kN is an assumption.
    """

    t_ignition: float = 0.0
    t_burn: float = 3.0
    mass_fraction_final: float = 0.6
    cg_initial: float = 1.86
    cg_fraction_final: float = 0.8
    thrust_boost: float = 30.0e3
    thrust_sustain: float = 5.0e3

    def __post_init__(self):
        _require_positive(self, ("t_burn", "cg_initial"))
        for name in ("mass_fraction_final", "cg_fraction_final"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"FlightProfiles.{name} must lie in (0, 1), got {value!r}")
        if not (math.isfinite(self.t_ignition) and self.t_ignition >= 0):
            raise ValueError("FlightProfiles.t_ignition must be >= 0")
        for name in ("thrust_boost", "thrust_sustain"):
            if not (math.isfinite(getattr(self, name)) and getattr(self, name) >= 0):
                raise ValueError(f"FlightProfiles.{name} must be >= 0")

    @property
    def cg_final(self) -> float:
        return self.cg_initial * self.cg_fraction_final

    @property
    def design_thrust(self) -> float:
        """Thrust the autopilot is designed with (the cruise estimate)."""
        return self.thrust_sustain

    def burn_fraction(self, t: float) -> float:
        """Normalised burn progress in [0, 1]."""
        x = (t - self.t_ignition) / self.t_burn
        return min(max(x, 0.0), 1.0)


@dataclass(frozen=True)
class UncertaintyBounds:
    """Worst-case magnitudes of the unmodelled pitch terms."""

    delta_cm_alpha_max: float = 0.3 * 5.5313
    delta_thrust_max: float = 25.0e3
    delta_cg_max: float = 0.372
    delta_nozzle_max: float = math.radians(5.0)
    lumped_mass_term_max: float = 1.0

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"UncertaintyBounds.{f.name} must be >= 0, got {value!r}")


@dataclass(frozen=True)
class UncertaintyRealization:
    """Actual values of the non-profile uncertainties seen by the plant.

    ``mass_term`` is the additive pitch acceleration reached at burnout;
    it ramps in with burn progress so it vanishes at launch.  Scenarios
    draw it per run from the seed within ``lumped_mass_term_max``.
    """

    delta_cm_alpha: float = 0.0
    delta_nozzle: float = 0.0
    mass_term: float = 0.0


@dataclass
class PlantState:
    alpha: float = 0.0
    q: float = 0.0
    theta: float = 0.0
    t: float = 0.0

    def is_finite(self) -> bool:
        return all(math.isfinite(v) for v in (self.alpha, self.q, self.theta, self.t))


def dynamic_pressure(rho: float, v: float) -> float:
    """Return ``0.5 * rho * v**2`` [Pa]."""
    return 0.5 * rho * v * v


def mass_at(profiles: FlightProfiles, m0: float, t: float) -> float:
    """Mass [kg] at time ``t``, geometric decay from ``m0`` to ``m_f`` over the burn."""
    frac = profiles.burn_fraction(t)
    if frac >= 1.0:
        return m0 * profiles.mass_fraction_final
    return m0 * profiles.mass_fraction_final ** frac


def cg_at(profiles: FlightProfiles, t: float) -> float:
    """CG distance from the nose [m]; moves forward from ``cg_initial`` to ``cg_final``."""
    frac = profiles.burn_fraction(t)
    if frac >= 1.0:
        return profiles.cg_final
    return profiles.cg_initial * profiles.cg_fraction_final ** frac


def thrust_at(profiles: FlightProfiles, t: float) -> float:
    """Boost-sustain thrust [N]; zero before ignition."""
    if t < profiles.t_ignition:
        return 0.0
    if t < profiles.t_ignition + profiles.t_burn:
        return profiles.thrust_boost
    return profiles.thrust_sustain


def alpha_dot(p: MissileParams, m: float, alpha: float, q: float,
              delta_n: float, delta_t: float, thrust: float) -> float:
    """Angle-of-attack rate [rad/s]."""
    if not m > 0:
        raise ValueError(f"mass must be positive, got {m!r}")
    mv = m * p.v_m
    qs = p.qbar * p.s_ref
    return (qs * p.c_z_alpha0 / mv) * alpha + q + (thrust / mv) * delta_n \
        + (qs * p.c_z_deltaT0 / mv) * delta_t


def nozzle_effectiveness(p: MissileParams, cg: float, thrust: float) -> float:
    """Pitch acceleration per radian of nozzle deflection, ``T (l - x_cg) / I_yy``."""
    if not 0.0 < cg < p.l:
        raise ValueError(f"centre of gravity {cg!r} outside the airframe (0, {p.l})")
    return thrust * (p.l - cg) / p.i_yy


def q_dot_nominal(p: MissileParams, cg: float, alpha: float, delta_n: float,
                  delta_t: float, thrust: float) -> float:
    """Known part of the pitch acceleration [rad/s^2]."""
    return p.m_alpha * alpha + nozzle_effectiveness(p, cg, thrust) * delta_n \
        + p.m_delta_t * delta_t


def q_dot_perturbation(p: MissileParams, cg0: float, thrust0: float, alpha: float,
                       delta_n: float, d_cm_alpha: float, d_thrust: float,
                       d_cg: float, d_nozzle: float, mass_term: float) -> float:
    """Unknown part of the pitch acceleration, the lumped disturbance ``D``.

    Arguments are the deviations from the design values (``cg0``,
    ``thrust0``).  A positive ``d_cg`` moves the CG aft.
    """
    thrust = thrust0 + d_thrust
    return (p.pitch_moment_scale * d_cm_alpha * alpha
            - thrust * d_cg / p.i_yy * delta_n
            + thrust / p.i_yy * (p.l * d_nozzle - cg0 * d_nozzle - d_cg * d_nozzle)
            + mass_term)


def q_dot_true(p: MissileParams, profiles: FlightProfiles, realization: UncertaintyRealization,
               state: PlantState, delta_n: float, delta_t: float, t: float) -> float:
    """Pitch acceleration of the real airframe at time ``t``.

    Nominal model at launch values plus the perturbation driven by the
    actual thrust and CG schedules and ``realization``.
    """
    cg0 = profiles.cg_initial
    thrust0 = profiles.design_thrust
    nominal = q_dot_nominal(p, cg0, state.alpha, delta_n, delta_t, thrust0)
    mass_term = realization.mass_term * profiles.burn_fraction(t)
    return nominal + q_dot_perturbation(
        p, cg0, thrust0, state.alpha, delta_n,
        realization.delta_cm_alpha,
        thrust_at(profiles, t) - thrust0,
        cg_at(profiles, t) - cg0,
        realization.delta_nozzle,
        mass_term,
    )
