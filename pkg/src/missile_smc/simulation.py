"""
Fixed-step closed-loop simulation of the pitch autopilot.

Loop per controller tick (``sim.controller_rate``):

    gyro sample -> low-pass -> integrate to theta_meas -> SMC -> lead
    compensator -> actuator command (held until the next tick)

The plant and actuators advance at ``sim.dt_plant`` between ticks.  The
plant uses classical RK4; the actuator deflection inside a plant step is
interpolated linearly between its start and end values.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .actuation import Actuator
from .controller import smc_command
from .dynamics import (FlightProfiles, MissileParams, PlantState, UncertaintyRealization,
                       cg_at, mass_at, nozzle_effectiveness, q_dot_nominal, q_dot_true,
                       thrust_at)
from .metrics import StepMetrics, extract_metrics
from .scenario import Scenario
from .sensing import Gyro, LowPassFilter, integrate_rate

DIVERGENCE_THETA = 10.0  # rad

CSV_COLUMNS = ("t", "theta_true", "theta_meas", "alpha", "q", "delta_n", "delta_t",
               "s", "u_raw", "mass", "cg", "thrust")


def rk4_step(f, t: float, y: np.ndarray, dt: float) -> np.ndarray:
    """One classical Runge-Kutta step of ``y' = f(t, y)``."""
    k1 = f(t, y)
    k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = f(t + dt, y + dt * k3)
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass
class Trajectory:
    """Controller-rate log of one run; one numpy array per channel."""

    t: np.ndarray
    theta_true: np.ndarray
    theta_meas: np.ndarray
    alpha: np.ndarray
    q: np.ndarray
    delta_n: np.ndarray
    delta_t: np.ndarray
    s: np.ndarray
    u_raw: np.ndarray
    mass: np.ndarray
    cg: np.ndarray
    thrust: np.ndarray
    theta_command: float = 0.0
    diverged: bool = False
    max_disturbance: float = 0.0

    def __len__(self):
        return len(self.t)

    def columns(self):
        return [getattr(self, name) for name in CSV_COLUMNS]

    def to_csv(self) -> str:
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in zip(*self.columns()):
            writer.writerow([f"{v:.9g}" for v in row])
        return out.getvalue()

    def equals(self, other: "Trajectory") -> bool:
        """Bit-for-bit comparison of every channel and flag."""
        return (self.diverged == other.diverged
                and all(np.array_equal(a, b) for a, b in zip(self.columns(), other.columns())))


@dataclass(frozen=True)
class ControllerModel:
    """What the autopilot knows: launch-time pitch model only."""

    f_per_alpha: float
    g_n: float
    g_t: float

    @classmethod
    def from_launch(cls, p: MissileParams, profiles: FlightProfiles) -> "ControllerModel":
        return cls(
            f_per_alpha=p.m_alpha,
            g_n=nozzle_effectiveness(p, profiles.cg_initial, profiles.design_thrust),
            g_t=p.m_delta_t,
        )


class _FrozenProfiles:
    """Profiles pinned at their design values (time-varying effects off)."""

    def __init__(self, profiles: FlightProfiles, m0: float):
        self._p = profiles
        self._m0 = m0

    def mass(self, t):
        return self._m0

    def cg(self, t):
        return self._p.cg_initial

    def thrust(self, t):
        return self._p.design_thrust


class _LiveProfiles:
    def __init__(self, profiles: FlightProfiles, m0: float):
        self._p = profiles
        self._m0 = m0

    def mass(self, t):
        return mass_at(self._p, self._m0, t)

    def cg(self, t):
        return cg_at(self._p, t)

    def thrust(self, t):
        return thrust_at(self._p, t)


def plant_rhs(p: MissileParams, prof: FlightProfiles, realization: UncertaintyRealization,
              sched):
    """Return ``deriv(t, alpha, q, delta_n, delta_t) -> (alpha_dot, q_dot)``.

    Inlined equivalent of :func:`alpha_dot` and :func:`q_dot_true` for the
    inner integration loop; ``sched`` supplies mass, CG and thrust.
    """
    qs = p.qbar * p.s_ref
    za_num = qs * p.c_z_alpha0 / p.v_m
    zd_num = qs * p.c_z_deltaT0 / p.v_m
    inv_v = 1.0 / p.v_m
    m_a = p.m_alpha + p.pitch_moment_scale * realization.delta_cm_alpha
    m_dt = p.m_delta_t
    thrust0 = prof.design_thrust
    cg0 = prof.cg_initial
    arm0 = p.l - cg0
    d_noz = realization.delta_nozzle
    inv_i = 1.0 / p.i_yy
    g_n0 = thrust0 * arm0 * inv_i
    burn = prof.burn_fraction
    mt = realization.mass_term

    def deriv(t, alpha, q, dn, dt_):
        m = sched.mass(t)
        thrust = sched.thrust(t)
        d_cg = sched.cg(t) - cg0
        a_dot = (za_num * alpha + thrust * dn * inv_v + zd_num * dt_) / m + q
        q_dot = (m_a * alpha + g_n0 * dn + m_dt * dt_
                 - thrust * d_cg * inv_i * dn
                 + thrust * inv_i * (arm0 - d_cg) * d_noz
                 + mt * burn(t))
        return a_dot, q_dot

    return deriv


def _run_rng(seed) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed))


def run_step_response(scenario: Scenario) -> Trajectory:
    """Simulate one closed-loop pitch step and return the controller-rate log."""
    p = scenario.missile
    prof = scenario.profiles
    smc = scenario.resolved_smc()
    sim = scenario.sim
    if abs(scenario.gyro.sample_rate - sim.controller_rate) > 1e-9:
        raise ValueError("gyro sample_rate must equal the controller rate")

    rng = _run_rng(sim.seed)
    if sim.time_varying:
        mass_term = float(rng.uniform(-1.0, 1.0)) * scenario.uncertainty.lumped_mass_term_max
        realization = UncertaintyRealization(scenario.realization.delta_cm_alpha,
                                             scenario.realization.delta_nozzle, mass_term)
        sched = _LiveProfiles(prof, p.m0)
    else:
        realization = UncertaintyRealization()
        sched = _FrozenProfiles(prof, p.m0)

    gyro = Gyro(scenario.gyro, rng)
    ctrl_dt = sim.controller_dt
    filt = LowPassFilter(scenario.filter, ctrl_dt)
    model = ControllerModel.from_launch(p, prof)

    ideal = sim.actuator_model == "ideal"
    act_n = Actuator(scenario.nozzle, ctrl_dt, compensated=sim.compensator)
    act_t = Actuator(scenario.elevator, ctrl_dt, compensated=sim.compensator)

    deriv = plant_rhs(p, prof, realization, sched)

    theta_cmd = sim.theta_command
    cg0 = prof.cg_initial
    thrust0 = prof.design_thrust
    s0 = sim.initial_state
    alpha, q, theta = s0.alpha, s0.q, s0.theta
    theta_meas = theta
    filt.reset(q)
    dn = dt_defl = 0.0

    n_ticks = int(round(sim.duration / ctrl_dt)) + 1
    sub = sim.substeps
    h = sim.dt_plant
    log = [[] for _ in CSV_COLUMNS]
    diverged = False
    max_d = 0.0

    for k in range(n_ticks):
        t = k * ctrl_dt
        q_f = filt.step(gyro.sample(q))
        theta_meas = integrate_rate(theta_meas, q_f, ctrl_dt) if k else theta_meas
        e = theta_cmd - theta_meas
        e_dot = -q_f
        cmd = smc_command(smc, model.f_per_alpha * alpha, model.g_n, model.g_t, 0.0, e, e_dot)

        if ideal:
            dn, dt_defl = cmd.delta_n_cmd, cmd.delta_t_cmd
        else:
            act_n.set_command(cmd.delta_n_cmd)
            act_t.set_command(cmd.delta_t_cmd)

        if sim.time_varying:
            d_real = q_dot_true(p, prof, realization, PlantState(alpha, q, theta, t), dn, dt_defl, t) \
                - q_dot_nominal(p, cg0, alpha, dn, dt_defl, thrust0)
            max_d = max(max_d, abs(d_real))

        for col, v in zip(log, (t, theta, theta_meas, alpha, q, dn, dt_defl, cmd.s_value,
                                cmd.u_raw, sched.mass(t), sched.cg(t), sched.thrust(t))):
            col.append(v)

        if k == n_ticks - 1:
            break

        for j in range(sub):
            ts = t + j * h
            if ideal:
                dn1, dt1 = dn, dt_defl
            else:
                dn1 = act_n.step(h)
                dt1 = act_t.step(h)
            dnm = 0.5 * (dn + dn1)
            dtm = 0.5 * (dt_defl + dt1)
            a1, q1 = deriv(ts, alpha, q, dn, dt_defl)
            a2, q2 = deriv(ts + 0.5 * h, alpha + 0.5 * h * a1, q + 0.5 * h * q1, dnm, dtm)
            a3, q3 = deriv(ts + 0.5 * h, alpha + 0.5 * h * a2, q + 0.5 * h * q2, dnm, dtm)
            a4, q4 = deriv(ts + h, alpha + h * a3, q + h * q3, dn1, dt1)
            theta += h / 6.0 * (q + 2.0 * (q + 0.5 * h * q1) + 2.0 * (q + 0.5 * h * q2) + (q + h * q3))
            alpha += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
            q += h / 6.0 * (q1 + 2.0 * q2 + 2.0 * q3 + q4)
            dn, dt_defl = dn1, dt1

        if not (math.isfinite(theta) and math.isfinite(alpha) and math.isfinite(q)) \
                or abs(theta) > DIVERGENCE_THETA:
            diverged = True
            break

    arrays = [np.asarray(col, dtype=float) for col in log]
    return Trajectory(*arrays, theta_command=theta_cmd, diverged=diverged, max_disturbance=max_d)


def simulate_metrics(scenario: Scenario) -> StepMetrics:
    traj = run_step_response(scenario)
    return extract_metrics(traj, scenario.sim.theta_command)


def angle_seed(seed: int, index: int) -> int:
    """Per-angle seed derived from the base seed."""
    return int(np.random.SeedSequence([seed, 1, index]).generate_state(1)[0])


def angle_sweep(scenario: Scenario, angles) -> list[tuple[float, StepMetrics]]:
    """One run per commanded angle (rad), each with its own derived seed."""
    out = []
    for i, angle in enumerate(angles):
        if not 0.0 <= angle <= math.pi / 2 + 1e-12:
            raise ValueError(f"angle {angle!r} outside [0, pi/2]")
        sc = scenario.replace(sim__theta_command=float(angle),
                              sim__seed=angle_seed(scenario.sim.seed, i))
        out.append((float(angle), simulate_metrics(sc)))
    return out
