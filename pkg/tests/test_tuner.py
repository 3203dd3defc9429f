import math

import pytest

from missile_smc.metrics import StepMetrics
from missile_smc.scenario import paper_default
from missile_smc.tuner import (NoViableCellError, SweepCell, SweepGrid, _atomic_write, cell_seed, export_surfaces,
                               run_cell, run_sweep, select_optimum, summary_report, surface_csv)

SHORT = paper_default().replace(sim__duration=0.6)


def test_default_grid_arithmetic():
    g = SweepGrid()
    assert g.shape == (51, 51) and g.shape[0] * g.shape[1] == 2601
    assert g.gains[0] == 0.0 and g.gains[-1] == 1.0 and g.gains[16] == 0.32 and g.gains[33] == 0.66
    assert SweepGrid(step=0.1).shape == (11, 11)
    assert SweepGrid(0.3, 0.3).shape == (1, 1)


def test_grid_validation():
    with pytest.raises(ValueError):
        SweepGrid(step=0.0)
    with pytest.raises(ValueError):
        SweepGrid(0.5, 0.2)


def test_cell_seed_depends_only_on_indices():
    assert cell_seed(0, 3, 4) == cell_seed(0, 3, 4)
    assert len({cell_seed(0, i, j) for i in range(5) for j in range(5)}) == 25


def test_workers_do_not_change_results():
    grid = SweepGrid(0.2, 0.6, 0.2)
    one = run_sweep(grid, SHORT, workers=1)
    two = run_sweep(grid, SHORT, workers=2)
    assert one == two
    assert surface_csv(one, "time_constant") == surface_csv(two, "time_constant")


def test_cell_independent_of_traversal():
    grid = SweepGrid(0.2, 0.6, 0.2)
    cells = run_sweep(grid, SHORT)
    assert run_cell(SHORT, grid, 2, 1) == cells[2][1]
    assert (cells[2][1].k_tvc, cells[2][1].k_elev) == (0.6, 0.4)


def _cell(k_tvc, k_elev, tau, settle, ov, diverged=False):
    m = StepMetrics(tau, settle, ov, tau, diverged)
    viable = not diverged and tau is not None and tau <= 0.35
    return SweepCell(k_tvc, k_elev, m, viable, diverged)


def test_select_optimum_rules():
    cells = [[_cell(0.1, 0.1, 0.2, 0.6, 0.01), _cell(0.1, 0.2, 0.4, 0.3, 0.0)],
             [_cell(0.2, 0.1, 0.2, 0.5, 0.02), _cell(0.2, 0.2, 0.3, 0.5, 0.01)]]
    k_tvc, k_elev, m = select_optimum(cells)
    assert (k_tvc, k_elev) == (0.2, 0.2)
    assert m.settling_time_5pct == 0.5


def test_select_optimum_none_viable():
    with pytest.raises(NoViableCellError):
        select_optimum([[_cell(0, 0, None, None, None), _cell(0, 1, 0.5, 1.0, 0.0, diverged=True)]])


def test_export_full_grid_shape(tmp_path):
    gains = SweepGrid().gains
    cells = [[_cell(a, b, 0.2, None if a == b else 0.5, 0.0, diverged=(a == 1.0)) for b in gains] for a in gains]
    paths = export_surfaces(cells, tmp_path)
    assert sorted(p.name for p in paths) == ["max_overshoot_deg.csv", "settling_time.csv", "time_constant.csv"]
    rows = (tmp_path / "settling_time.csv").read_text().splitlines()
    assert len(rows) == 52 and all(len(r.split(",")) == 52 for r in rows)
    assert rows[-1].split(",")[1:] == [""] * 51


def test_summary_report_fields():
    cells = [[_cell(0.32, 0.66, 0.16, 0.58, math.radians(1.67))]]
    text = summary_report(cells, SweepGrid(0.32, 0.32))
    for key in ("TVC gain: 0.32", "Elevator gain: 0.66", "Time constant", "Settling time", "Maximum overshoot"):
        assert key in text
    assert "1.67" in text


def test_atomic_write_leaves_no_partial(tmp_path):
    target = tmp_path / "out.csv"
    target.write_text("old")

    with pytest.raises(TypeError):
        _atomic_write(target, None)
    assert target.read_text() == "old"
    assert [p.name for p in tmp_path.iterdir()] == ["out.csv"]
