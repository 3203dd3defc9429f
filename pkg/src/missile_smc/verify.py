"""
Acceptance checks.  Each ``check_*`` returns a :class:`CheckResult`;
``run_all`` runs them in order.  Shared by ``missile-smc verify`` and the
test-suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .actuation import natural_frequency
from .dynamics import FlightProfiles, MissileParams, cg_at, mass_at
from .metrics import extract_metrics
from .scenario import Scenario
from .sensing import FilterConfig, Gyro, GyroConfig, LowPassFilter, noise_power
from .simulation import angle_sweep, rk4_step, run_step_response
from .tuner import SweepGrid, run_sweep, select_optimum

PASS, FAIL, WARN, NA = "pass", "FAIL", "warn", "n/a"


@dataclass
class CheckResult:
    number: int
    name: str
    status: str
    detail: str

    @property
    def ok(self) -> bool:
        return self.status != FAIL

    def line(self) -> str:
        return f"[{self.status:>4}] {self.number:2d}. {self.name}: {self.detail}"


def _fmt(x, unit="s", digits=3):
    return "undef" if x is None else f"{x:.{digits}f}{unit}"


def check_actuator_constants(scenario: Scenario) -> CheckResult:
    wn_n = natural_frequency(40.0, 0.3)
    wn_e = natural_frequency(45.0, 0.3)
    ok = abs(wn_n - 173.0) <= 1.0 and abs(wn_e - 195.0) <= 1.0
    return CheckResult(1, "actuator natural frequencies", PASS if ok else FAIL,
                       f"nozzle {wn_n:.2f} rad/s (173), elevator {wn_e:.2f} rad/s (195), tol 1")


def check_profile_endpoints(scenario: Scenario) -> CheckResult:
    prof = FlightProfiles()
    m = mass_at(prof, MissileParams().m0, 3.0)
    cg = cg_at(prof, 3.0)
    ok = math.isclose(m, 97.2, rel_tol=1e-12) and math.isclose(cg, 1.488, rel_tol=1e-12)
    return CheckResult(2, "profile endpoints at 3 s", PASS if ok else FAIL,
                       f"mass {m!r} kg (97.2), cg {cg!r} m (1.488)")


def check_noise_power(scenario: Scenario, draws: int = 1_000_000) -> CheckResult:
    np_val = noise_power(0.015)
    ok = abs(np_val - 2.4674e-4) / 2.4674e-4 <= 1e-4
    detail = f"NP(0.015) = {np_val:.6e} (2.4674e-4, tol 0.01%)"
    cfg = scenario.gyro
    if cfg.arw == 0:
        return CheckResult(3, "gyro noise power", PASS if ok else FAIL,
                           detail + "; sampled variance n/a (arw = 0)")
    gyro = Gyro(cfg, seed=scenario.sim.seed)
    samples = gyro.sample_many(np.zeros(draws))
    expected = noise_power(cfg.arw) * cfg.sample_rate
    var = float(np.var(samples))
    rel = abs(var - expected) / expected
    ok = ok and rel <= 0.02
    return CheckResult(3, "gyro noise power", PASS if ok else FAIL,
                       detail + f"; sampled var {var:.5g} vs {expected:.5g} ({rel:.2%}, tol 2%)")


def measured_gain(filt: LowPassFilter, omega: float, dt: float, cycles: int = 200) -> float:
    """Steady-state amplitude ratio of ``filt`` driven by ``sin(omega t)``."""
    n = int(cycles * 2 * math.pi / (omega * dt))
    t = np.arange(n) * dt
    y = np.array([filt.step(math.sin(omega * ti)) for ti in t])
    half = n // 2
    basis = np.column_stack([np.sin(omega * t[half:]), np.cos(omega * t[half:])])
    coef, *_ = np.linalg.lstsq(basis, y[half:], rcond=None)
    return float(math.hypot(*coef))


def check_filter_response(scenario: Scenario) -> CheckResult:
    cfg = FilterConfig()
    dt = 1.0 / GyroConfig().sample_rate
    gain = measured_gain(LowPassFilter(cfg, dt), 157.08, dt)
    target = 1.0 / (2.0 * cfg.zeta)
    rel = abs(gain - target) / target
    return CheckResult(4, "filter gain at 157.08 rad/s", PASS if rel <= 0.05 else FAIL,
                       f"{gain:.4f} vs {target:.4f} ({rel:.2%}, tol 5%)")


def oscillator_error(dt: float, omega: float = 2.0 * math.pi, t_end: float = 2.0) -> float:
    """Global RK4 state error at ``t_end`` on ``x'' = -omega^2 x``, ``x(0) = 1``.

    Velocity is scaled by ``1/omega`` so both components weigh equally.
    """
    def f(t, y):
        return np.array([y[1], -omega * omega * y[0]])

    y = np.array([1.0, 0.0])
    n = int(round(t_end / dt))
    for k in range(n):
        y = rk4_step(f, k * dt, y, dt)
    t = n * dt
    return float(math.hypot(y[0] - math.cos(omega * t), (y[1] + omega * math.sin(omega * t)) / omega))


def check_integrator_order(scenario: Scenario) -> CheckResult:
    e1 = oscillator_error(0.02)
    e2 = oscillator_error(0.01)
    ratio = e1 / e2
    ok = abs(ratio - 16.0) <= 0.2 * 16.0
    return CheckResult(5, "RK4 error ratio on halving dt", PASS if ok else FAIL,
                       f"{ratio:.2f} (16 +/- 20%)")


SWEEP_ANGLES_DEG = tuple(range(10, 91, 10))


def _sweep_ok(scenario: Scenario):
    results = angle_sweep(scenario, [math.radians(a) for a in SWEEP_ANGLES_DEG])
    bad, slow = [], []
    for (angle, m) in results:
        deg = round(math.degrees(angle))
        if m.diverged or m.time_constant is None or m.time_constant > 0.35:
            bad.append((deg, m.time_constant, m.diverged))
        elif m.time_constant > 0.27:
            slow.append(deg)
    return results, bad, slow


def check_time_constant_goal(scenario: Scenario) -> CheckResult:
    results, bad, slow = _sweep_ok(scenario)
    taus = ", ".join(f"{round(math.degrees(a))}:{_fmt(m.time_constant, '')}" for a, m in results)
    if bad:
        return CheckResult(6, "time constant <= 0.35 s, 10-90 deg", FAIL,
                           f"violations {bad}; tau by angle {taus}")
    status = WARN if slow else PASS
    note = f"; above 0.27 s at {slow}" if slow else ""
    return CheckResult(6, "time constant <= 0.35 s, 10-90 deg", status, f"tau by angle {taus}{note}")


def _table3(scenario: Scenario):
    sc = scenario.replace(sim__theta_command=math.radians(35.0))
    m = extract_metrics(run_step_response(sc), sc.sim.theta_command)
    cmd = sc.sim.theta_command
    ok = (not m.diverged
          and m.time_constant is not None and 0.10 <= m.time_constant <= 0.27
          and m.settling_time_5pct is not None and 0.35 <= m.settling_time_5pct <= 0.90
          and m.max_overshoot is not None and m.max_overshoot <= 0.05 * cmd)
    ov = None if m.max_overshoot is None else math.degrees(m.max_overshoot)
    detail = (f"tau {_fmt(m.time_constant)} [0.10, 0.27], settling {_fmt(m.settling_time_5pct)} "
              f"[0.35, 0.90], overshoot {_fmt(ov, ' deg', 2)} (<= 1.75 deg)"
              + (", diverged" if m.diverged else ""))
    return ok, detail


def check_table3(scenario: Scenario) -> CheckResult:
    ok, detail = _table3(scenario)
    return CheckResult(7, "35 deg step vs tuned-system table", PASS if ok else FAIL, detail)


def check_sweep_structure(scenario: Scenario, full: bool = False) -> CheckResult:
    default = SweepGrid()
    n_default = default.shape[0] * default.shape[1]
    grid = default if full else SweepGrid(step=0.1)
    cells = run_sweep(grid, scenario)
    flat = [c for row in cells for c in row]
    if any(c.viable and (c.failed or c.metrics.time_constant > 0.35) for c in flat):
        return CheckResult(8, "gain sweep", FAIL, "a viable cell violates the 0.35 s goal")
    try:
        k_tvc, k_elev, m = select_optimum(cells)
    except RuntimeError as exc:
        return CheckResult(8, "gain sweep", FAIL, f"default grid {n_default} cells; {exc}")
    key = math.inf if m.settling_time_5pct is None else m.settling_time_5pct
    others = [math.inf if c.metrics.settling_time_5pct is None else c.metrics.settling_time_5pct
              for c in flat if c.viable]
    ok = n_default == 2601 and all(key <= o for o in others)
    return CheckResult(8, "gain sweep", PASS if ok else FAIL,
                       f"default grid {n_default} cells (2601); ran {len(flat)} cells; "
                       f"{len(others)} viable; optimum ({k_tvc:g}, {k_elev:g}) "
                       f"settling {_fmt(m.settling_time_5pct)}"
                       + ("; no viable cell settles within the run" if key == math.inf else ""))


def _post_settle_error(traj, cmd: float):
    m = extract_metrics(traj, cmd)
    if m.diverged or m.settling_time_5pct is None:
        return None
    mask = traj.t >= m.settling_time_5pct
    return float(np.max(np.abs(traj.theta_true[mask] - cmd)))


def check_compensator_contrast(scenario: Scenario, seeds: int = 10) -> CheckResult:
    cmd = math.radians(35.0)
    bound = math.radians(5.0)
    comp_ok = 0
    uncomp_bad = 0
    for k in range(seeds):
        base = scenario.replace(sim__theta_command=cmd, sim__duration=10.0, sim__seed=scenario.sim.seed + k)
        err_c = _post_settle_error(run_step_response(base.replace(sim__compensator=True)), cmd)
        err_u = _post_settle_error(run_step_response(base.replace(sim__compensator=False)), cmd)
        comp_ok += err_c is not None and err_c < bound
        uncomp_bad += err_u is None or err_u >= bound
    ok = comp_ok == seeds and uncomp_bad > seeds / 2
    return CheckResult(9, "lead compensator contrast", PASS if ok else FAIL,
                       f"compensated within 5 deg: {comp_ok}/{seeds} (need {seeds}); "
                       f"uncompensated out/diverged: {uncomp_bad}/{seeds} (need > {seeds // 2})")


def check_measurement_drift(scenario: Scenario, seeds: int = 100) -> CheckResult:
    if scenario.gyro.arw == 0:
        return CheckResult(10, "measured vs true drift", NA, "arw = 0, no noise")
    cmd = math.radians(50.0)
    d2, d10, settled = [], [], 0
    smc = scenario.resolved_smc()
    for k in range(seeds):
        sc = scenario.replace(sim__theta_command=cmd, sim__duration=10.0, sim__seed=scenario.sim.seed + k)
        tr = run_step_response(sc)
        if tr.diverged or tr.t[-1] < 10.0 - 1e-9:
            continue
        gap = np.abs(tr.theta_meas - tr.theta_true)
        d2.append(gap[np.searchsorted(tr.t, 2.0)])
        d10.append(gap[-1])
        last = tr.t >= tr.t[-1] - 1.0
        settled += float(np.mean(np.abs(cmd - tr.theta_meas[last]))) <= smc.boundary_layer / smc.c
    if len(d10) < seeds:
        return CheckResult(10, "measured vs true drift", FAIL,
                           f"{seeds - len(d10)}/{seeds} runs diverged")
    m2, m10 = float(np.mean(d2)), float(np.mean(d10))
    ok = m10 > 0 and m10 >= 3.0 * m2 and settled == seeds
    return CheckResult(10, "measured vs true drift", PASS if ok else FAIL,
                       f"mean gap {math.degrees(m2):.3f} deg @2 s, {math.degrees(m10):.3f} deg @10 s "
                       f"(ratio {m10 / m2:.2f}, need >= 3); measured error in layer {settled}/{seeds}")


def check_small_angle_settling(scenario: Scenario) -> CheckResult:
    results = angle_sweep(scenario, [math.radians(10.0), math.radians(40.0)])
    s10 = results[0][1].settling_time_5pct
    s40 = results[1][1].settling_time_5pct
    ok = s10 is not None and s40 is not None and s10 > s40
    return CheckResult(11, "settling(10 deg) > settling(40 deg)", PASS if ok else FAIL,
                       f"{_fmt(s10)} vs {_fmt(s40)}")


def check_boost_robustness(scenario: Scenario) -> CheckResult:
    parts, ok = [], True
    for boost in (15e3, 30e3, 45e3):
        sc = scenario.replace(profiles__thrust_boost=boost)
        _, bad, _ = _sweep_ok(sc)
        t3_ok, _ = _table3(sc)
        ok = ok and not bad and t3_ok
        parts.append(f"{boost / 1e3:g} kN: sweep {'ok' if not bad else 'fail'}, "
                     f"35 deg {'ok' if t3_ok else 'fail'}")
    return CheckResult(12, "criteria 6-7 across boost thrust", PASS if ok else FAIL, "; ".join(parts))


CHECKS: list[Callable[[Scenario], CheckResult]] = [
    check_actuator_constants,
    check_profile_endpoints,
    check_noise_power,
    check_filter_response,
    check_integrator_order,
    check_time_constant_goal,
    check_table3,
    check_sweep_structure,
    check_compensator_contrast,
    check_measurement_drift,
    check_small_angle_settling,
    check_boost_robustness,
]


def run_all(scenario: Scenario, full_sweep: bool = False, echo=None) -> list[CheckResult]:
    results = []
    for check in CHECKS:
        if check is check_sweep_structure:
            res = check(scenario, full=full_sweep)
        else:
            res = check(scenario)
        if echo is not None:
            echo(res.line())
        results.append(res)
    return results
