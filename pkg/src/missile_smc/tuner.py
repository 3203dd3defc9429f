"""Grid search over the nozzle/tail gain split."""

from __future__ import annotations

import csv
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .metrics import StepMetrics
from .scenario import Scenario
from .simulation import simulate_metrics

TIME_CONSTANT_GOAL = 0.35  # s


class NoViableCellError(RuntimeError):
    """No gain pair meets the time-constant goal."""


@dataclass(frozen=True)
class SweepGrid:
    gain_min: float = 0.0
    gain_max: float = 1.0
    step: float = 0.02
    step_command: float = math.radians(35.0)

    def __post_init__(self):
        if not 0.0 <= self.gain_min <= self.gain_max <= 1.0:
            raise ValueError("SweepGrid needs 0 <= gain_min <= gain_max <= 1")
        if not self.step > 0:
            raise ValueError("SweepGrid.step must be positive")

    @property
    def gains(self) -> np.ndarray:
        n = int(round((self.gain_max - self.gain_min) / self.step)) + 1
        return np.round(self.gain_min + self.step * np.arange(n), 10)

    @property
    def shape(self) -> tuple[int, int]:
        n = len(self.gains)
        return n, n


@dataclass(frozen=True)
class SweepCell:
    k_tvc: float
    k_elev: float
    metrics: StepMetrics
    viable: bool
    failed: bool


def cell_seed(seed: int, i: int, j: int) -> int:
    """Seed for cell ``(i, j)``; independent of grid traversal order."""
    return int(np.random.SeedSequence([seed, 2, i, j]).generate_state(1)[0])


def cell_scenario(base: Scenario, grid: SweepGrid, i: int, j: int) -> Scenario:
    gains = grid.gains
    return base.replace(smc__k_tvc=float(gains[i]), smc__k_elev=float(gains[j]),
                        sim__theta_command=grid.step_command,
                        sim__seed=cell_seed(base.sim.seed, i, j))


def _make_cell(k_tvc: float, k_elev: float, metrics: StepMetrics) -> SweepCell:
    failed = metrics.diverged
    viable = (not failed and metrics.time_constant is not None
              and metrics.time_constant <= TIME_CONSTANT_GOAL)
    return SweepCell(k_tvc, k_elev, metrics, viable, failed)


def run_cell(base: Scenario, grid: SweepGrid, i: int, j: int) -> SweepCell:
    sc = cell_scenario(base, grid, i, j)
    return _make_cell(sc.smc.k_tvc, sc.smc.k_elev, simulate_metrics(sc))


def _run_cell_args(args):
    return run_cell(*args)


def run_sweep(grid: SweepGrid, base: Scenario, workers: int = 1) -> list[list[SweepCell]]:
    """Simulate every gain pair; ``cells[i][j]`` has ``k_tvc = gains[i]``, ``k_elev = gains[j]``.

    Results do not depend on ``workers``.
    """
    n, m = grid.shape
    jobs = [(base, grid, i, j) for i in range(n) for j in range(m)]
    if workers <= 1:
        flat = [_run_cell_args(job) for job in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(_run_cell_args, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    return [flat[i * m:(i + 1) * m] for i in range(n)]


def _settling_key(cell: SweepCell):
    st = cell.metrics.settling_time_5pct
    ov = cell.metrics.max_overshoot
    return (math.inf if st is None else st, math.inf if ov is None else ov, cell.k_tvc, cell.k_elev)


def select_optimum(cells) -> tuple[float, float, StepMetrics]:
    """Viable cell with the shortest settling time.

    Ties go to the smaller overshoot, then the smaller nozzle gain.
    """
    flat = [c for row in cells for c in row] if cells and isinstance(cells[0], (list, tuple)) else list(cells)
    viable = [c for c in flat if c.viable]
    if not viable:
        raise NoViableCellError("no gain pair reaches a time constant within "
                                f"{TIME_CONSTANT_GOAL} s")
    best = min(viable, key=_settling_key)
    return best.k_tvc, best.k_elev, best.metrics


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(value: Optional[float]) -> str:
    return "" if value is None else f"{value:.9g}"


def surface_csv(cells, metric: str, scale: float = 1.0) -> str:
    """One metric as a matrix with the gain axes as first row and column."""
    import io

    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["k_tvc\\k_elev"] + [f"{c.k_elev:.9g}" for c in cells[0]])
    for row in cells:
        values = []
        for c in row:
            v = None if c.failed else getattr(c.metrics, metric)
            values.append(_fmt(None if v is None else v * scale))
        writer.writerow([f"{row[0].k_tvc:.9g}"] + values)
    return out.getvalue()


SURFACES = {
    "time_constant.csv": ("time_constant", 1.0),
    "settling_time.csv": ("settling_time_5pct", 1.0),
    "max_overshoot_deg.csv": ("max_overshoot", 180.0 / math.pi),
}


def export_surfaces(cells, path) -> list[Path]:
    """Write the time-constant, settling-time and overshoot (deg) matrices under ``path``."""
    path = Path(path)
    written = []
    for name, (metric, scale) in SURFACES.items():
        target = path / name
        try:
            _atomic_write(target, surface_csv(cells, metric, scale))
        except OSError as exc:
            raise OSError(f"cannot write {target}: {exc}") from exc
        written.append(target)
    return written


def summary_report(cells, grid: SweepGrid) -> str:
    flat = [c for row in cells for c in row]
    lines = [
        f"grid: {len(cells)}x{len(cells[0])} cells, gains {grid.gain_min:g}..{grid.gain_max:g} "
        f"step {grid.step:g}, command {math.degrees(grid.step_command):g} deg",
        f"viable cells: {sum(c.viable for c in flat)}",
        f"failed cells: {sum(c.failed for c in flat)}",
    ]
    try:
        k_tvc, k_elev, m = select_optimum(cells)
    except NoViableCellError:
        lines.append("optimum: none (no viable cell)")
        return "\n".join(lines) + "\n"
    lines += [
        f"TVC gain: {k_tvc:g}",
        f"Elevator gain: {k_elev:g}",
        f"Time constant (s): {_fmt(m.time_constant) or 'undefined'}",
        f"Settling time (s): {_fmt(m.settling_time_5pct) or 'undefined'}",
        "Maximum overshoot (deg): "
        + (_fmt(math.degrees(m.max_overshoot)) if m.max_overshoot is not None else "undefined"),
    ]
    return "\n".join(lines) + "\n"
