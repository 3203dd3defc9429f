"""Second-order fin/nozzle actuators with hard limits, and the lead compensator."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

_ZETA_MAX = 1.0 / math.sqrt(2.0)


def natural_frequency(bandwidth_hz: float, zeta: float) -> float:
    """Natural frequency [rad/s] of a second-order lag with the given -3 dB bandwidth."""
    if not 0.0 < zeta < _ZETA_MAX:
        raise ValueError(f"damping ratio must lie in (0, 1/sqrt(2)), got {zeta!r}")
    z2 = zeta * zeta
    return 2.0 * math.pi * bandwidth_hz / math.sqrt(1.0 - 2.0 * z2 + math.sqrt(2.0 - 4.0 * z2 + 4.0 * z2 * z2))


def bandwidth_hz(omega_n: float, zeta: float) -> float:
    """Inverse of :func:`natural_frequency`: the frequency where ``|H| = 1/sqrt(2)``."""
    z2 = zeta * zeta
    return omega_n * math.sqrt(1.0 - 2.0 * z2 + math.sqrt(4.0 * z2 * z2 - 4.0 * z2 + 2.0)) / (2.0 * math.pi)


def compensator_time_constant(zeta: float, omega_n: float) -> float:
    """Actuator time constant ``1 / (zeta omega_n)`` [s]."""
    if not (zeta > 0 and omega_n > 0):
        raise ValueError("zeta and omega_n must be positive")
    return 1.0 / (zeta * omega_n)


@dataclass(frozen=True)
class ActuatorConfig:
    """Actuator limits and dynamics.

    Angles in rad, rates in rad/s.  ``slew_rate`` or ``max_deflection`` may be
    ``inf`` to disable that limit.
    """

    max_deflection: float
    bandwidth_hz: float
    slew_rate: float
    damping_ratio: float = 0.3
    compensator_n: float = 0.1

    def __post_init__(self):
        if not self.max_deflection > 0:
            raise ValueError(f"ActuatorConfig.max_deflection must be positive, got {self.max_deflection!r}")
        if not self.slew_rate > 0:
            raise ValueError(f"ActuatorConfig.slew_rate must be positive, got {self.slew_rate!r}")
        if not (math.isfinite(self.bandwidth_hz) and self.bandwidth_hz > 0):
            raise ValueError(f"ActuatorConfig.bandwidth_hz must be positive, got {self.bandwidth_hz!r}")
        if not 0.0 < self.damping_ratio < _ZETA_MAX:
            raise ValueError(f"ActuatorConfig.damping_ratio must lie in (0, 1/sqrt(2)), got {self.damping_ratio!r}")
        if not 0.0 < self.compensator_n < 1.0:
            raise ValueError(f"ActuatorConfig.compensator_n must lie in (0, 1), got {self.compensator_n!r}")

    @property
    def natural_frequency(self) -> float:
        return natural_frequency(self.bandwidth_hz, self.damping_ratio)

    @property
    def time_constant(self) -> float:
        return compensator_time_constant(self.damping_ratio, self.natural_frequency)

    @classmethod
    def nozzle(cls, **kw) -> "ActuatorConfig":
        base = dict(max_deflection=math.radians(15.0), bandwidth_hz=40.0,
                    slew_rate=math.radians(400.0), damping_ratio=0.3)
        base.update(kw)
        return cls(**base)

    @classmethod
    def elevator(cls, **kw) -> "ActuatorConfig":
        base = dict(max_deflection=math.radians(30.0), bandwidth_hz=45.0,
                    slew_rate=math.radians(600.0), damping_ratio=0.3)
        base.update(kw)
        return cls(**base)


@dataclass
class LeadCompensator:
    """Discrete ``(T s + 1) / (n T s + 1)`` via the bilinear transform.

    The DC gain is exactly one for any step size.
    """

    time_constant: float
    n: float
    dt: float
    _x_prev: float = field(default=0.0, init=False)
    _y_prev: float = field(default=0.0, init=False)

    def __post_init__(self):
        if not 0.0 < self.n < 1.0:
            raise ValueError(f"lead compensator needs 0 < n < 1, got {self.n!r}")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        k = 2.0 / self.dt
        tk = self.time_constant * k
        ntk = self.n * tk
        a0 = ntk + 1.0
        self._b0 = (tk + 1.0) / a0
        self._b1 = (1.0 - tk) / a0
        self._a1 = (1.0 - ntk) / a0

    @classmethod
    def for_actuator(cls, cfg: ActuatorConfig, dt: float) -> "LeadCompensator":
        return cls(cfg.time_constant, cfg.compensator_n, dt)

    @property
    def high_frequency_gain(self) -> float:
        """Gain at Nyquist; exactly ``1/n`` since the bilinear map sends ``s = inf`` to ``z = -1``."""
        return (self._b0 - self._b1) / (1.0 - self._a1)

    @property
    def step_jump(self) -> float:
        """First output for a unit step from rest, ``(2T/dt + 1) / (2nT/dt + 1)``."""
        return self._b0

    def reset(self, value: float = 0.0) -> None:
        self._x_prev = value
        self._y_prev = value

    def step(self, x: float) -> float:
        y = self._b0 * x + self._b1 * self._x_prev - self._a1 * self._y_prev
        self._x_prev = x
        self._y_prev = y
        return y


def compensate(comp: LeadCompensator, delta_required: float) -> float:
    """Advance the lead compensator one sample and return the compensated command."""
    return comp.step(delta_required)


@dataclass
class ActuatorState:
    deflection: float = 0.0
    deflection_rate: float = 0.0


def _deriv(wn2: float, two_zw: float, cmd: float, x: float, v: float):
    return v, wn2 * (cmd - x) - two_zw * v


def actuator_step(cfg: ActuatorConfig, state: ActuatorState, delta_cmd: float, dt: float,
                  omega_n: float | None = None) -> ActuatorState:
    """Advance the actuator by ``dt`` with the command held, then apply the limits.

    The second-order lag is integrated with RK4.  Rate is clamped first
    (the position increment is limited to ``slew_rate * dt``), then position;
    a position clamp zeroes the rate.
    """
    if not dt > 0:
        raise ValueError("dt must be positive")
    wn = cfg.natural_frequency if omega_n is None else omega_n
    wn2 = wn * wn
    two_zw = 2.0 * cfg.damping_ratio * wn
    x0, v0 = state.deflection, state.deflection_rate

    k1x, k1v = _deriv(wn2, two_zw, delta_cmd, x0, v0)
    k2x, k2v = _deriv(wn2, two_zw, delta_cmd, x0 + 0.5 * dt * k1x, v0 + 0.5 * dt * k1v)
    k3x, k3v = _deriv(wn2, two_zw, delta_cmd, x0 + 0.5 * dt * k2x, v0 + 0.5 * dt * k2v)
    k4x, k4v = _deriv(wn2, two_zw, delta_cmd, x0 + dt * k3x, v0 + dt * k3v)
    x = x0 + dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
    v = v0 + dt / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)

    slew = cfg.slew_rate
    if v > slew:
        v = slew
    elif v < -slew:
        v = -slew
    max_step = slew * dt
    if x - x0 > max_step:
        x = x0 + max_step
    elif x - x0 < -max_step:
        x = x0 - max_step

    lim = cfg.max_deflection
    if x > lim:
        x, v = lim, 0.0
    elif x < -lim:
        x, v = -lim, 0.0
    return ActuatorState(x, v)


class Actuator:
    """Actuator channel owning its state and optional lead compensator."""

    def __init__(self, cfg: ActuatorConfig, controller_dt: float, compensated: bool = True):
        self.cfg = cfg
        self.omega_n = cfg.natural_frequency
        self.state = ActuatorState()
        self.compensator = LeadCompensator.for_actuator(cfg, controller_dt) if compensated else None
        self.command = 0.0

    def set_command(self, delta_required: float) -> float:
        if self.compensator is not None:
            delta_required = self.compensator.step(delta_required)
        self.command = delta_required
        return delta_required

    def step(self, dt: float) -> float:
        self.state = actuator_step(self.cfg, self.state, self.command, dt, self.omega_n)
        return self.state.deflection
