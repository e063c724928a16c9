# Dynamic reward adjustment and the worker population response to it.
# The reward follows a dead-band proportional law on the relative worker disparity; the worker count follows the
# relative reward change, plus uniform noise proportional to the noise-free candidate count.
import logging
from dataclasses import dataclass, replace
from typing import Iterator, Tuple

import numpy as np

from . import specs
from .errors import ZeroWorkers

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RewardState:
    r: float
    alpha: float = specs.DEFAULT_ALPHA
    delta: float = specs.DEFAULT_DELTA
    r_min: float = specs.REWARD_FLOOR


@dataclass(frozen=True)
class WorkerPopulation:
    w: int
    target: int = specs.DEFAULT_TARGET_WORKERS
    beta: float = specs.DEFAULT_BETA
    gamma: float = specs.DEFAULT_GAMMA
    cap: int = specs.WORKER_CAP_FACTOR * specs.DEFAULT_TARGET_WORKERS


def relative_disparity(w: int, target: int) -> float:
    if w < 1:
        raise ZeroWorkers()
    return abs(target - w) / w


def next_reward(state: RewardState, w: int, target: int) -> float:
    if relative_disparity(w, target) < state.delta:
        return state.r
    r = state.r * (1 + state.alpha * (target - w) / w)
    return max(r, state.r_min)


def next_worker_count(pop: WorkerPopulation, r_prev: float, r_next: float, rng: np.random.Generator) -> int:
    if r_prev <= 0:
        raise ValueError(f"previous reward must be positive, got {r_prev}")
    candidate = pop.w * pop.beta * (1 + (r_next - r_prev) / r_prev)
    # one draw per call whatever gamma is, so the stream position never depends on it
    noise = pop.gamma * candidate * rng.uniform(-1.0, 1.0)
    return int(min(max(round(candidate + noise), 0), pop.cap))


# one coupled update: the reward reacts to the current count, then the count reacts to the reward
def advance(state: RewardState, pop: WorkerPopulation,
            rng: np.random.Generator) -> Tuple[RewardState, WorkerPopulation]:
    if pop.w == 0:
        logger.warning("worker population is extinct, updating as if one worker were left")
        pop = replace(pop, w=1)
    r_next = next_reward(state, pop.w, pop.target)
    w_next = next_worker_count(pop, state.r, r_next, rng)
    return replace(state, r=r_next), replace(pop, w=w_next)


# yields the (reward, population) in force at each of `steps` steps, starting with the given ones
def iterate(state: RewardState, pop: WorkerPopulation, steps: int,
            rng: np.random.Generator) -> Iterator[Tuple[RewardState, WorkerPopulation]]:
    for _ in range(steps):
        yield state, pop
        state, pop = advance(state, pop, rng)
