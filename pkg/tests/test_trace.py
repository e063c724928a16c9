import pytest

from pouisim.trace import COLUMNS, SimTrace, TraceRow, format_cell, render_csv


def row(step, reward=100.0, workers=10):
    return TraceRow(step=step, reward=reward, workers=workers, target_workers=20, pending_jobs=3,
                    completed_this_step=2, expired_this_step=0, validated_this_step=1, rejected_this_step=1,
                    total_energy_kwh=0.25 * (step + 1), mean_reputation=0.95, subsidy_pool=1000.5)


def test_cells():
    assert format_cell(7) == "7"
    assert format_cell(3.5100000000000002) == "3.51"
    assert format_cell(0.0) == "0"
    assert format_cell(1 / 3) == "0.333333"
    assert format_cell("PoW") == "PoW"


def test_csv_layout():
    trace = SimTrace([row(0), row(1, reward=130.0, workers=13)])
    lines = trace.to_csv().splitlines()
    assert lines[0] == ",".join(COLUMNS)
    assert lines[2] == "1,130,13,20,3,2,0,1,1,0.5,0.95,1000.5"
    assert len(lines) == 3


def test_steps_must_increase():
    trace = SimTrace()
    trace.append(row(0))
    with pytest.raises(ValueError):
        trace.append(row(0))


def test_column():
    trace = SimTrace([row(0, workers=10), row(1, workers=12)])
    assert trace.column("workers").tolist() == [10, 12]
    with pytest.raises(KeyError):
        trace.column("temperature")


def test_write_leaves_only_the_target(tmp_path):
    target = tmp_path / "trace.csv"
    SimTrace([row(0)]).write_csv(target)
    assert [p.name for p in tmp_path.iterdir()] == ["trace.csv"]
    assert target.read_text(encoding="utf-8").startswith("step,reward,workers")


def test_failed_write_leaves_nothing(tmp_path):
    with pytest.raises(OSError):
        SimTrace([row(0)]).write_csv(tmp_path / "missing" / "trace.csv")
    assert list(tmp_path.iterdir()) == []


def test_render_csv():
    assert render_csv(("a", "b"), [(1, 0.5)]) == "a,b\n1,0.5\n"
