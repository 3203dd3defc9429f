"""Step-response metrics: time constant (63.2 %), 5 % settling time, overshoot."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

TIME_CONSTANT_LEVEL = 1.0 - math.exp(-1.0)
SETTLING_BAND = 0.05


@dataclass(frozen=True)
class StepMetrics:
    """Metrics of one step response.

    ``None`` marks a threshold that was never reached within the run.
    ``rise_time`` is the same 63.2 % crossing as ``time_constant``.
    """

    time_constant: Optional[float]
    settling_time_5pct: Optional[float]
    max_overshoot: Optional[float]
    rise_time: Optional[float]
    diverged: bool = False

    @classmethod
    def undefined(cls, diverged: bool = False) -> "StepMetrics":
        return cls(None, None, None, None, diverged)


def _first_crossing(t: np.ndarray, y: np.ndarray, level: float) -> Optional[float]:
    above = np.nonzero(y >= level)[0]
    if above.size == 0:
        return None
    i = int(above[0])
    if i == 0:
        return float(t[0])
    y0, y1 = y[i - 1], y[i]
    return float(t[i - 1] + (level - y0) / (y1 - y0) * (t[i] - t[i - 1]))


def _settling_time(t: np.ndarray, y: np.ndarray, band: float) -> Optional[float]:
    # y is normalised so the target is 1
    outside = np.abs(y - 1.0) > band
    if outside[-1]:
        return None
    idx = np.nonzero(outside)[0]
    if idx.size == 0:
        return float(t[0])
    i = int(idx[-1])
    y0, y1 = y[i], y[i + 1]
    edge = 1.0 + band if y0 > 1.0 else 1.0 - band
    return float(t[i] + (edge - y0) / (y1 - y0) * (t[i + 1] - t[i]))


def extract_metrics(traj, theta_command: float, signal: str = "theta_true") -> StepMetrics:
    """Compute step metrics of ``traj.<signal>`` against ``theta_command`` (rad).

    Crossing times are linearly interpolated between samples.  A diverged
    run has no settling time.  Overshoot is returned in rad.
    """
    diverged = bool(getattr(traj, "diverged", False))
    t = np.asarray(traj.t, dtype=float)
    y = np.asarray(getattr(traj, signal), dtype=float)
    if t.size == 0 or theta_command == 0:
        return StepMetrics.undefined(diverged)
    yn = y / theta_command
    tau = _first_crossing(t, yn, TIME_CONSTANT_LEVEL)
    settle = None if diverged else _settling_time(t, yn, SETTLING_BAND)
    overshoot = max(float(np.max(yn)) - 1.0, 0.0) * abs(theta_command)
    return StepMetrics(tau, settle, overshoot, tau, diverged)
