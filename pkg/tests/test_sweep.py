from dataclasses import replace

import pytest

from pouisim.errors import ConfigError, RangeViolation
from pouisim.harness import run
from pouisim.sweep import SWEEP_COLUMNS, derive_seed, summarize, summary_window, sweep, sweep_csv
from pouisim.trace import SimTrace, TraceRow


def trace_of(workers, rewards):
    return SimTrace([
        TraceRow(step=i, reward=r, workers=w, target_workers=20, pending_jobs=0, completed_this_step=0,
                 expired_this_step=0, validated_this_step=0, rejected_this_step=0, total_energy_kwh=0.0,
                 mean_reputation=1.0, subsidy_pool=0.0)
        for i, (w, r) in enumerate(zip(workers, rewards))
    ])


def test_derived_seeds_are_stable_and_distinct():
    assert derive_seed(42, 0) == derive_seed(42, 0)
    seeds = {derive_seed(42, i) for i in range(50)}
    assert len(seeds) == 50
    assert derive_seed(42, 0) != derive_seed(43, 0)
    assert all(0 <= seed < 2 ** 64 for seed in seeds)


def test_short_runs_summarize_their_second_half():
    trace = trace_of([10, 10, 18, 22], [1.0, 1.0, 2.0, 4.0])
    assert [row.step for row in summary_window(trace).rows] == [2, 3]
    deviation, spread = summarize(trace, 20)
    assert deviation == pytest.approx(2.0)
    assert spread == pytest.approx(1.0)


def test_long_runs_summarize_steps_100_to_199():
    trace = trace_of([0] * 100 + [20] * 100 + [0] * 50, [1.0] * 250)
    window = summary_window(trace)
    assert (window.rows[0].step, window.rows[-1].step) == (100, 199)
    assert summarize(trace, 20) == (0.0, 0.0)


def test_sweep_runs_every_value_in_order(small_params):
    summaries = sweep(small_params, "alpha", [0.1, 0.2, 0.4], max_workers=2)
    assert [s.value for s in summaries] == [0.1, 0.2, 0.4]
    assert [s.seed for s in summaries] == [derive_seed(small_params.seed, i) for i in range(3)]
    assert all(s.mean_abs_deviation >= 0 and s.reward_std >= 0 for s in summaries)


def test_sweeping_the_base_value_matches_a_plain_run(small_params):
    [summary] = sweep(small_params, "alpha", [small_params.alpha])
    trace = run(replace(small_params, seed=derive_seed(small_params.seed, 0)))
    assert (summary.mean_abs_deviation, summary.reward_std) == summarize(trace, small_params.target_workers)


def test_sweep_is_reproducible(small_params):
    params = replace(small_params, steps=10)
    assert sweep(params, "gamma", [0.0, 0.1]) == sweep(params, "gamma", [0.0, 0.1])


def test_bad_value_stops_the_sweep_before_running(small_params):
    calls = []
    with pytest.raises(RangeViolation) as info:
        sweep(small_params, "gamma", [0.1, 1.5], runner=calls.append)
    assert info.value.field == "gamma"
    assert calls == []


def test_only_controller_gains_are_swept(small_params):
    with pytest.raises(ConfigError):
        sweep(small_params, "steps", [10])


def test_empty_sweep(small_params):
    assert sweep(small_params, "beta", []) == []


def test_sweep_csv(small_params):
    summaries = sweep(replace(small_params, steps=10), "delta", [0.05])
    lines = sweep_csv("delta", summaries).splitlines()
    assert lines[0] == ",".join(SWEEP_COLUMNS)
    assert lines[1].startswith("delta,0.05,")
    assert len(lines) == 2
