"""
Command-line front end.

Exit codes
----------
0  success
1  verify: at least one check failed
2  usage or scenario error
3  simulate: the run diverged
4  I/O error writing outputs
5  sweep: no gain pair meets the time-constant goal
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

from .metrics import extract_metrics
from .scenario import Scenario, ScenarioError, dump_scenario, load_scenario, paper_default
from .simulation import run_step_response
from .tuner import NoViableCellError, SweepGrid, _atomic_write, export_surfaces, run_sweep, \
    select_optimum, summary_report

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_DIVERGED = 3
EXIT_IO = 4
EXIT_NO_VIABLE = 5

SCENARIO_ENV = "MISSILE_SMC_SCENARIO"
BUILTIN_SCENARIOS = {"paper-default": paper_default}


def resolve_scenario(arg) -> Scenario:
    """Scenario from ``--scenario``, else ``$MISSILE_SMC_SCENARIO``, else the built-in default."""
    name = arg or os.environ.get(SCENARIO_ENV) or "paper-default"
    if name in BUILTIN_SCENARIOS:
        return BUILTIN_SCENARIOS[name]()
    return load_scenario(name)


def _undef(x, scale=1.0):
    return "undefined" if x is None else f"{x * scale:.6g}"


def metrics_report(metrics, step_deg: float) -> str:
    lines = [
        f"Step command (deg): {step_deg:g}",
        f"Time constant (s): {_undef(metrics.time_constant)}",
        f"Rise time to 63.2% (s): {_undef(metrics.rise_time)}",
        f"Settling time 5% (s): {_undef(metrics.settling_time_5pct)}",
        f"Maximum overshoot (deg): {_undef(metrics.max_overshoot, 180.0 / math.pi)}",
        f"Diverged: {'yes' if metrics.diverged else 'no'}",
    ]
    return "\n".join(lines) + "\n"


def cmd_simulate(scenario: Scenario, step_deg: float, output_dir) -> int:
    if not 0.0 <= step_deg <= 90.0:
        print(f"error: --step-deg must lie in [0, 90], got {step_deg:g}", file=sys.stderr)
        return EXIT_USAGE
    sc = scenario.replace(sim__theta_command=math.radians(step_deg))
    traj = run_step_response(sc)
    metrics = extract_metrics(traj, sc.sim.theta_command)
    report = metrics_report(metrics, step_deg)
    out = Path(output_dir)
    try:
        _atomic_write(out / "trajectory.csv", traj.to_csv())
        _atomic_write(out / "metrics.txt", report)
    except OSError as exc:
        print(f"error: cannot write outputs to {out}: {exc}", file=sys.stderr)
        return EXIT_IO
    sys.stdout.write(report)
    if traj.diverged:
        print(f"error: run diverged at t = {traj.t[-1]:.3f} s", file=sys.stderr)
        return EXIT_DIVERGED
    return EXIT_OK


def cmd_sweep(scenario: Scenario, output_dir, workers: int = 1, grid: SweepGrid | None = None) -> int:
    grid = grid or SweepGrid()
    cells = run_sweep(grid, scenario, workers=workers)
    report = summary_report(cells, grid)
    out = Path(output_dir)
    try:
        export_surfaces(cells, out)
        _atomic_write(out / "optimum.txt", report)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    sys.stdout.write(report)
    try:
        select_optimum(cells)
    except NoViableCellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_VIABLE
    return EXIT_OK


def cmd_verify(scenario: Scenario, full_sweep: bool = False) -> int:
    from .verify import run_all

    results = run_all(scenario, full_sweep=full_sweep, echo=print)
    failed = [r for r in results if not r.ok]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="missile-smc",
        description="Sliding-mode pitch autopilot for a TVC/tail-controlled missile.",
        epilog="exit codes: 0 ok, 1 verify failed, 2 usage/scenario error, 3 diverged, "
               "4 I/O error, 5 no viable gain pair",
    )
    parser.add_argument("--scenario", help=f"scenario file or 'paper-default' (default: ${SCENARIO_ENV} "
                                           "or paper-default)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one step response")
    p.add_argument("--step-deg", type=float, default=35.0)
    p.add_argument("--out", default="out")

    p = sub.add_parser("sweep", help="grid search over the nozzle/tail gains")
    p.add_argument("--out", default="sweep")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.add_argument("--step", type=float, default=0.02, help="gain grid spacing")
    p.add_argument("--coarse", action="store_true", help="shorthand for --step 0.1 (11x11 grid)")
    p.add_argument("--gain-min", type=float, default=0.0)
    p.add_argument("--gain-max", type=float, default=1.0)
    p.add_argument("--step-deg", type=float, default=35.0)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--full-sweep", action="store_true", help="run the gain-sweep check on the full grid")

    sub.add_parser("show-scenario", help="print the resolved scenario in file format")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = resolve_scenario(args.scenario)
        if args.command == "simulate":
            return cmd_simulate(scenario, args.step_deg, args.out)
        if args.command == "sweep":
            if args.workers < 1:
                raise ValueError("--workers must be >= 1")
            grid = SweepGrid(args.gain_min, args.gain_max, 0.1 if args.coarse else args.step,
                             math.radians(args.step_deg))
            return cmd_sweep(scenario, args.out, args.workers, grid)
        if args.command == "verify":
            return cmd_verify(scenario, full_sweep=args.full_sweep)
        sys.stdout.write(dump_scenario(scenario))
        return EXIT_OK
    except (ScenarioError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
