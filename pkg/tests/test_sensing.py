import cmath
import math

import numpy as np
import pytest

from missile_smc.sensing import (FilterConfig, Gyro, GyroConfig, LowPassFilter, filter_step, integrate_rate,
                                 noise_power, sample_gyro)


def test_noise_power_examples():
    assert noise_power(0.015) == pytest.approx(2.4674e-4, rel=1e-4)
    assert noise_power(0.03) == pytest.approx(9.8696e-4, rel=1e-4)
    assert noise_power(0.0) == 0.0


def test_sampled_variance():
    gyro = Gyro(GyroConfig(), seed=3)
    samples = gyro.sample_many(np.zeros(1_000_000))
    assert np.var(samples) == pytest.approx(0.049348, rel=0.02)
    assert abs(np.mean(samples)) < 3 * math.sqrt(0.049348 / 1e6) * 2


def test_gyro_deterministic_and_noise_free():
    a = Gyro(GyroConfig(), seed=7)
    b = Gyro(GyroConfig(), seed=7)
    assert [a.sample(0.1) for _ in range(5)] == [sample_gyro(b, 0.1) for _ in range(5)]
    quiet = Gyro(GyroConfig(arw=0.0))
    assert quiet.sample(0.25) == 0.25


def test_gyro_config_rejects_negative():
    with pytest.raises(ValueError):
        GyroConfig(arw=-1.0)


def _discrete_gain(filt, omega):
    b, a = filt.coefficients
    z = cmath.exp(1j * omega * filt.dt)
    num = b[0] + b[1] / z + b[2] / z ** 2
    den = a[0] + a[1] / z + a[2] / z ** 2
    return abs(num / den)


def test_filter_gain_at_cutoff():
    filt = LowPassFilter(FilterConfig(), 1 / 200)
    assert _discrete_gain(filt, 157.08) == pytest.approx(1 / 1.4, rel=0.05)


def test_filter_rolloff_at_ten_times_cutoff():
    cfg = FilterConfig()
    filt = LowPassFilter(cfg, 1e-5)
    assert _discrete_gain(filt, 10 * cfg.omega_n) == pytest.approx(0.0100, abs=2e-4)


def test_filter_unity_dc_gain():
    filt = LowPassFilter(FilterConfig(), 1 / 200)
    for _ in range(400):
        y = filter_step(filt, 2.0)
    assert y == pytest.approx(2.0, abs=1e-9)


def test_filter_rejects_cutoff_above_nyquist():
    with pytest.raises(ValueError):
        LowPassFilter(FilterConfig(cutoff_hz=150.0), 1 / 200)


def test_integrate_rate():
    assert integrate_rate(0.1, 2.0, 0.005) == pytest.approx(0.11)
    with pytest.raises(ValueError):
        integrate_rate(0.0, 1.0, 0.0)
