import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import astuple, dataclass, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import specs
from .errors import ConfigError
from .harness import run
from .loader import validate_params
from .poui import SimParams
from .trace import SimTrace, render_csv

logger = logging.getLogger(__name__)

# SWEEPABLE_PARAMS are the controller gains a sweep may vary
SWEEPABLE_PARAMS = ("alpha", "delta", "beta", "gamma")

SWEEP_COLUMNS = ("param", "value", "seed", "mean_abs_deviation", "reward_std")


@dataclass(frozen=True)
class SweepSummary:
    value: float
    seed: int
    # mean |w - target| over the summary window
    mean_abs_deviation: float
    reward_std: float


def derive_seed(base_seed: int, index: int) -> int:
    state = np.random.SeedSequence([base_seed, index]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def summary_window(trace: SimTrace) -> SimTrace:
    start, stop = specs.SUMMARY_WINDOW
    if len(trace) < stop:
        return SimTrace(trace.rows[len(trace) // 2:])
    return SimTrace([row for row in trace.rows if start <= row.step < stop])


def summarize(trace: SimTrace, target: int) -> Tuple[float, float]:
    window = summary_window(trace)
    if not len(window):
        return float("nan"), float("nan")
    deviation = np.abs(window.column("workers") - target)
    return float(deviation.mean()), float(window.column("reward").std())


# Runs one simulation per value of `param_name`, in parallel, and summarizes each run.
# Every candidate is validated before anything runs, so a bad value fails the whole sweep up front.
def sweep(base: SimParams, param_name: str, values: Sequence[float], max_workers: Optional[int] = None,
          runner: Callable[[SimParams], SimTrace] = run) -> List[SweepSummary]:
    if param_name not in SWEEPABLE_PARAMS:
        raise ConfigError(f"cannot sweep {param_name!r}, expected one of {', '.join(SWEEPABLE_PARAMS)}")
    candidates = [
        validate_params(replace(base, **{param_name: float(value)}, seed=derive_seed(base.seed, index)))
        for index, value in enumerate(values)
    ]
    if not candidates:
        return []

    logger.info("sweeping %s over %d value(s)", param_name, len(candidates))
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        traces = list(executor.map(runner, candidates))

    summaries = []
    for params, trace in zip(candidates, traces):
        deviation, spread = summarize(trace, params.target_workers)
        summaries.append(SweepSummary(getattr(params, param_name), params.seed, deviation, spread))
    return summaries


def sweep_csv(param_name: str, summaries: Sequence[SweepSummary]) -> str:
    return render_csv(SWEEP_COLUMNS, ((param_name, *astuple(summary)) for summary in summaries))
