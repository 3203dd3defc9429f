import math

import pytest

from missile_smc import cli
from missile_smc.scenario import ScenarioError, paper_default
from missile_smc.verify import NA, check_measurement_drift, check_noise_power


@pytest.fixture
def short_cfg(tmp_path):
    f = tmp_path / "short.ini"
    f.write_text("[sim]\nduration = 0.6\n")
    return f


def test_simulate_writes_outputs(tmp_path, short_cfg, capsys):
    out = tmp_path / "run"
    rc = cli.main(["--scenario", str(short_cfg), "simulate", "--step-deg", "35", "--out", str(out)])
    assert rc == 0
    report = (out / "metrics.txt").read_text()
    for key in ("Time constant", "Settling time", "Maximum overshoot"):
        assert key in report
    assert (out / "trajectory.csv").read_text().startswith("t,theta_true,theta_meas")
    assert "Time constant" in capsys.readouterr().out


def test_simulate_zero_step(tmp_path, short_cfg):
    out = tmp_path / "zero"
    assert cli.main(["--scenario", str(short_cfg), "simulate", "--step-deg", "0", "--out", str(out)]) == 0
    assert "Time constant (s): undefined" in (out / "metrics.txt").read_text()


def test_simulate_io_error(tmp_path, short_cfg):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    rc = cli.main(["--scenario", str(short_cfg), "simulate", "--out", str(blocker / "sub")])
    assert rc == cli.EXIT_IO
    assert not (blocker / "sub").exists()


def test_simulate_divergence_code(tmp_path):
    f = tmp_path / "div.ini"
    f.write_text("[sim]\nduration = 1\ntheta0_deg = 570\nq0_deg_s = 300\n")
    assert cli.main(["--scenario", str(f), "simulate", "--out", str(tmp_path / "o")]) == cli.EXIT_DIVERGED


def test_step_out_of_range(tmp_path):
    assert cli.main(["simulate", "--step-deg", "120", "--out", str(tmp_path)]) == cli.EXIT_USAGE


def test_bad_scenario_is_usage_error(tmp_path, capsys):
    f = tmp_path / "bad.ini"
    f.write_text("[missile]\nmas0 = 1\n")
    assert cli.main(["--scenario", str(f), "show-scenario"]) == cli.EXIT_USAGE
    assert "mas0" in capsys.readouterr().err


def test_env_var_scenario(tmp_path, monkeypatch):
    f = tmp_path / "env.ini"
    f.write_text("[smc]\nk_tvc = 0.5\n")
    monkeypatch.setenv(cli.SCENARIO_ENV, str(f))
    assert cli.resolve_scenario(None).smc.k_tvc == 0.5
    assert cli.resolve_scenario("paper-default") == paper_default()
    monkeypatch.setenv(cli.SCENARIO_ENV, str(tmp_path / "missing.ini"))
    with pytest.raises(ScenarioError):
        cli.resolve_scenario(None)


def test_sweep_single_cell(tmp_path, short_cfg):
    out = tmp_path / "sw"
    rc = cli.main(["--scenario", str(short_cfg), "sweep", "--gain-min", "0.3", "--gain-max", "0.3",
                   "--workers", "1", "--out", str(out)])
    assert rc == 0
    assert "TVC gain: 0.3" in (out / "optimum.txt").read_text()


def test_sweep_worker_count_byte_identical(tmp_path, short_cfg):
    outs = []
    for w in ("1", "2"):
        out = tmp_path / f"w{w}"
        cli.main(["--scenario", str(short_cfg), "sweep", "--gain-min", "0.2", "--gain-max", "0.6",
                  "--step", "0.2", "--workers", w, "--out", str(out)])
        outs.append({p.name: p.read_bytes() for p in out.iterdir()})
    assert outs[0] == outs[1] and len(outs[0]) == 4


def test_sweep_no_viable_cell(tmp_path, short_cfg):
    rc = cli.main(["--scenario", str(short_cfg), "sweep", "--gain-min", "0", "--gain-max", "0",
                   "--workers", "1", "--out", str(tmp_path / "nv")])
    assert rc == cli.EXIT_NO_VIABLE
    assert "none" in (tmp_path / "nv" / "optimum.txt").read_text()


def test_noise_checks_not_applicable_without_noise():
    sc = paper_default().replace(gyro__arw=0.0)
    assert check_measurement_drift(sc).status == NA
    res = check_noise_power(sc)
    assert res.ok and "n/a" in res.detail


def test_show_scenario_roundtrip(capsys):
    assert cli.main(["show-scenario"]) == 0
    assert "[smc]" in capsys.readouterr().out
