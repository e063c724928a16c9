import pytest

from pouisim.cli import Energy, Simulate, Sweep, main, parse_args
from pouisim.errors import UsageError

SMALL_CFG = """\
target_workers = 20
initial_workers = 10
job_arrival_per_step = 8
num_posters = 4
initial_validators = 5
steps = 6
seed = 3
"""


@pytest.fixture
def small_cfg(tmp_path):
    path = tmp_path / "small.cfg"
    path.write_text(SMALL_CFG, encoding="utf-8")
    return path


def usage_kind(argv):
    with pytest.raises(UsageError) as info:
        parse_args(argv)
    return info.value.kind


def test_parse_simulate():
    cmd = parse_args(["simulate", "--config", "reference.cfg", "--out", "trace.csv"])
    assert cmd == Simulate("reference.cfg", "trace.csv")


def test_parse_simulate_with_seed():
    cmd = parse_args(["simulate", "--config", "reference.cfg", "--out", "trace.csv", "--seed", "18446744073709551615"])
    assert cmd.seed_override == 2 ** 64 - 1


def test_parse_sweep():
    cmd = parse_args(["sweep", "--config", "reference.cfg", "--param", "alpha", "--values", "0.1,0.2,0.4",
                      "--out", "sweep.csv"])
    assert cmd == Sweep("reference.cfg", "alpha", (0.1, 0.2, 0.4), "sweep.csv")


def test_parse_energy():
    cmd = parse_args(["energy", "--out", "out/energy.csv", "--verbose"])
    assert cmd == Energy("out/energy.csv", None, verbose=True)
    assert str(cmd.get_reductions_path()).replace("\\", "/") == "out/energy_reductions.csv"


@pytest.mark.parametrize("argv", [
    ["simulate"],
    ["simulate", "--config", "reference.cfg"],
    ["simulate", "--config"],
    [],
])
def test_missing_arguments(argv):
    assert usage_kind(argv) == UsageError.MISSING_ARGUMENT


@pytest.mark.parametrize("argv", [
    ["simulate", "--config", "a.cfg", "--out", "t.csv", "--fast"],
    ["replay", "--out", "t.csv"],
])
def test_unknown_flags(argv):
    assert usage_kind(argv) == UsageError.UNKNOWN_FLAG


@pytest.mark.parametrize("argv", [
    ["simulate", "--config", "a.cfg", "--out", "t.csv", "--seed", "minus-one"],
    ["simulate", "--config", "a.cfg", "--out", "t.csv", "--seed", "18446744073709551616"],
    ["simulate", "--config", "", "--out", "t.csv"],
    ["sweep", "--config", "a.cfg", "--param", "steps", "--values", "1", "--out", "s.csv"],
    ["sweep", "--config", "a.cfg", "--param", "alpha", "--values", "0.1,nan", "--out", "s.csv"],
    ["sweep", "--config", "a.cfg", "--param", "alpha", "--values", "0.1,,0.2", "--out", "s.csv"],
])
def test_bad_values(argv):
    assert usage_kind(argv) == UsageError.BAD_VALUE


def test_usage_error_exits_2(capsys):
    assert main(["simulate"]) == 2
    assert "--config" in capsys.readouterr().err


def test_energy_writes_both_tables(tmp_path):
    out = tmp_path / "energy.csv"
    assert main(["energy", "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "mechanism,e_sec_kwh,e_use_kwh,e_tot_kwh"
    assert lines[1] == "PoW,3.51,0,3.51"
    assert lines[2] == "PoS,0.1,0,0.1"
    assert lines[3] == "PoUI,0.1,0.5,0.6"

    reductions = (tmp_path / "energy_reductions.csv").read_text(encoding="utf-8").splitlines()
    assert reductions[0] == "basis,mechanism,baseline,reduction_pct"
    assert reductions[1] == "security,PoS,PoW,97.151"
    assert "total,PoUI,PoW,82.906" in reductions


def test_energy_reductions_path(tmp_path):
    out, reductions = tmp_path / "e.csv", tmp_path / "r.csv"
    assert main(["energy", "--out", str(out), "--reductions-out", str(reductions)]) == 0
    assert reductions.exists()


def test_simulate_writes_trace(tmp_path, small_cfg):
    out = tmp_path / "trace.csv"
    assert main(["simulate", "--config", str(small_cfg), "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0].startswith("step,reward,workers,target_workers")
    assert len(lines) == 7


def test_seed_override_changes_the_run(tmp_path, small_cfg):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["simulate", "--config", str(small_cfg), "--out", str(first)]) == 0
    assert main(["simulate", "--config", str(small_cfg), "--out", str(second), "--seed", "99"]) == 0
    assert first.read_text() != second.read_text()


def test_sweep_writes_one_row_per_value(tmp_path, small_cfg):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--config", str(small_cfg), "--param", "beta", "--values", "0.9,1.0,1.1",
                 "--out", str(out)]) == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "param,value,seed,mean_abs_deviation,reward_std"
    assert [line.split(",")[1] for line in lines[1:]] == ["0.9", "1", "1.1"]


def test_unreadable_config_exits_1(tmp_path, capsys):
    assert main(["simulate", "--config", str(tmp_path / "missing.cfg"), "--out", str(tmp_path / "t.csv")]) == 1
    assert "error" in capsys.readouterr().err
    assert not (tmp_path / "t.csv").exists()


def test_invalid_config_exits_1(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("validators_per_task = 4\n", encoding="utf-8")
    assert main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "t.csv")]) == 1


def test_unwritable_output_exits_1(tmp_path, small_cfg):
    assert main(["simulate", "--config", str(small_cfg), "--out", str(tmp_path / "no" / "t.csv")]) == 1


def test_shipped_config_runs_all_steps(tmp_path, reference_cfg):
    out = tmp_path / "trace.csv"
    assert main(["simulate", "--config", str(reference_cfg), "--out", str(out)]) == 0
    assert len(out.read_text(encoding="utf-8").splitlines()) == 201
