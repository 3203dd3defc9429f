"""
Gyro model: band-limited white rate noise, second-order low-pass, and
rectangular rate integration to a measured pitch angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GyroConfig:
    """Gyro noise figure and sample rate.

    Attributes
    ----------
    arw : float
        Angle random walk [deg/sqrt(hr)].
    sample_rate : float
        Sampling frequency [Hz].
    """

    arw: float = 0.015
    sample_rate: float = 200.0

    def __post_init__(self):
        if not (math.isfinite(self.arw) and self.arw >= 0):
            raise ValueError(f"GyroConfig.arw must be >= 0, got {self.arw!r}")
        if not (math.isfinite(self.sample_rate) and self.sample_rate > 0):
            raise ValueError(f"GyroConfig.sample_rate must be positive, got {self.sample_rate!r}")


@dataclass(frozen=True)
class FilterConfig:
    cutoff_hz: float = 25.0
    zeta: float = 0.7

    def __post_init__(self):
        if not (math.isfinite(self.cutoff_hz) and self.cutoff_hz > 0):
            raise ValueError(f"FilterConfig.cutoff_hz must be positive, got {self.cutoff_hz!r}")
        if not 0.0 < self.zeta <= 1.0:
            raise ValueError(f"FilterConfig.zeta must lie in (0, 1], got {self.zeta!r}")

    @property
    def omega_n(self) -> float:
        return 2.0 * math.pi * self.cutoff_hz


def noise_power(arw: float) -> float:
    """Band-limited white-noise power [rad^2/s] for an ARW figure in deg/sqrt(hr)."""
    x = arw * 60.0 * math.pi / 180.0
    return x * x


class Gyro:
    """Rate gyro sampled at ``cfg.sample_rate``.

    Each sample adds zero-mean Gaussian noise of variance
    ``noise_power * sample_rate``.  The stream is fully determined by ``seed``.
    """

    def __init__(self, cfg: GyroConfig, seed=0):
        self.cfg = cfg
        self.sigma = math.sqrt(noise_power(cfg.arw) * cfg.sample_rate)
        if isinstance(seed, np.random.Generator):
            self._rng = seed
        else:
            self._rng = np.random.default_rng(seed)

    def sample(self, true_rate: float) -> float:
        if self.sigma == 0.0:
            return true_rate
        return true_rate + self.sigma * float(self._rng.standard_normal())

    def sample_many(self, true_rates) -> np.ndarray:
        """Vectorised equivalent of repeated :meth:`sample` calls."""
        true_rates = np.asarray(true_rates, dtype=float)
        if self.sigma == 0.0:
            return true_rates.copy()
        return true_rates + self.sigma * self._rng.standard_normal(true_rates.shape)


def sample_gyro(gyro: Gyro, true_rate: float) -> float:
    return gyro.sample(true_rate)


class LowPassFilter:
    """``wn^2 / (s^2 + 2 zeta wn s + wn^2)`` discretised with the bilinear transform.

    The transform is pre-warped at ``wn`` so the discrete gain at the cutoff
    matches the continuous ``1/(2 zeta)``.  Unity DC gain.
    """

    def __init__(self, cfg: FilterConfig, dt: float):
        if not dt > 0:
            raise ValueError("dt must be positive")
        self.cfg = cfg
        self.dt = dt
        wn = cfg.omega_n
        if wn * dt >= math.pi:
            raise ValueError(f"cutoff {cfg.cutoff_hz} Hz is above Nyquist for dt={dt}")
        k = wn / math.tan(wn * dt / 2.0)
        k2 = k * k
        wn2 = wn * wn
        a0 = k2 + 2.0 * cfg.zeta * wn * k + wn2
        self._b0 = wn2 / a0
        self._b1 = 2.0 * wn2 / a0
        self._b2 = wn2 / a0
        self._a1 = (2.0 * wn2 - 2.0 * k2) / a0
        self._a2 = (k2 - 2.0 * cfg.zeta * wn * k + wn2) / a0
        self.reset()

    def reset(self, value: float = 0.0) -> None:
        self._x1 = self._x2 = value
        self._y1 = self._y2 = value

    @property
    def coefficients(self) -> tuple[np.ndarray, np.ndarray]:
        """``(b, a)`` in :func:`scipy.signal.lfilter` convention."""
        return (np.array([self._b0, self._b1, self._b2]),
                np.array([1.0, self._a1, self._a2]))

    def step(self, x: float) -> float:
        y = (self._b0 * x + self._b1 * self._x1 + self._b2 * self._x2
             - self._a1 * self._y1 - self._a2 * self._y2)
        self._x2, self._x1 = self._x1, x
        self._y2, self._y1 = self._y1, y
        return y


def filter_step(filt: LowPassFilter, noisy_rate: float) -> float:
    return filt.step(noisy_rate)


def integrate_rate(theta_meas: float, filtered_rate: float, dt: float) -> float:
    """One rectangular integration step of the filtered rate."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    return theta_meas + filtered_rate * dt
