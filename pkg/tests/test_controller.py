import logging

import numpy as np
import pytest

from pouisim.controller import (
    RewardState, WorkerPopulation, advance, iterate, next_reward, next_worker_count, relative_disparity,
)
from pouisim.errors import ZeroWorkers


def test_disparity_needs_workers():
    assert relative_disparity(200, 250) == pytest.approx(0.25)
    with pytest.raises(ZeroWorkers):
        relative_disparity(0, 250)


def test_reward_rises_when_workers_are_short():
    assert next_reward(RewardState(r=100.0), 100, 250) == pytest.approx(130.0, abs=1e-9)


def test_reward_falls_when_workers_are_plenty():
    assert next_reward(RewardState(r=100.0), 500, 250) == pytest.approx(90.0, abs=1e-9)
    assert next_reward(RewardState(r=120.0, alpha=0.2, delta=0.05), 300, 250) == pytest.approx(116.0, abs=1e-9)


def test_reward_holds_at_the_target():
    assert next_reward(RewardState(r=120.0, alpha=0.2, delta=0.05), 250, 250) == pytest.approx(120.0, abs=1e-9)


def test_dead_band_holds_the_reward():
    # |250 - 240| / 240 is below 0.05
    assert next_reward(RewardState(r=100.0), 240, 250) == 100.0
    assert next_reward(RewardState(r=100.0, delta=0.0), 240, 250) != 100.0


def test_reward_never_goes_below_the_floor():
    state = RewardState(r=1.0, alpha=10.0, r_min=1e-6)
    assert next_reward(state, 1000, 250) == 1e-6


def test_worker_count_follows_relative_reward_change():
    pop = WorkerPopulation(w=100, gamma=0.0)
    assert next_worker_count(pop, 100.0, 130.0, np.random.default_rng(0)) == 130


def test_worker_count_is_capped():
    pop = WorkerPopulation(w=100, gamma=0.0, cap=120)
    assert next_worker_count(pop, 100.0, 130.0, np.random.default_rng(0)) == 120


def test_worker_noise_stays_within_gamma():
    pop = WorkerPopulation(w=100, gamma=0.05)
    rng = np.random.default_rng(4)
    counts = {next_worker_count(pop, 100.0, 130.0, rng) for _ in range(500)}
    assert min(counts) >= 123 and max(counts) <= 137
    assert len(counts) > 1


def test_noise_is_bounded_by_gamma_times_the_candidate():
    # no reward change, so the candidate is the current count of 200
    pop = WorkerPopulation(w=200, gamma=0.05)
    rng = np.random.default_rng(2024)
    counts = np.array([next_worker_count(pop, 100.0, 100.0, rng) for _ in range(10_000)])
    assert counts.min() >= 190
    assert counts.max() <= 210


def test_one_noise_draw_per_update():
    used, fresh = np.random.default_rng(9), np.random.default_rng(9)
    next_worker_count(WorkerPopulation(w=100, gamma=0.0), 100.0, 130.0, used)
    fresh.uniform(-1.0, 1.0)
    assert used.random() == fresh.random()


def test_noise_free_convergence():
    state, pop = RewardState(r=100.0), WorkerPopulation(w=100, gamma=0.0)
    trajectory = list(iterate(state, pop, 30, np.random.default_rng(0)))
    workers = [p.w for _, p in trajectory]
    rewards = [s.r for s, _ in trajectory]

    assert workers[:13] == [100, 130, 154, 173, 188, 200, 210, 218, 224, 229, 233, 236, 239]
    assert set(workers[12:]) == {239}
    assert all(a < b for a, b in zip(rewards[:13], rewards[1:13]))
    assert len(set(rewards[12:])) == 1


def test_iterate_starts_with_the_given_state():
    state, pop = RewardState(r=50.0), WorkerPopulation(w=80)
    first_state, first_pop = next(iterate(state, pop, 5, np.random.default_rng(0)))
    assert (first_state, first_pop) == (state, pop)
    assert len(list(iterate(state, pop, 5, np.random.default_rng(0)))) == 5


def test_extinct_population_restarts_from_one(caplog):
    with caplog.at_level(logging.WARNING, logger="pouisim.controller"):
        state, pop = advance(RewardState(r=1.0), WorkerPopulation(w=0, gamma=0.0), np.random.default_rng(0))
    assert state.r == pytest.approx(50.8)
    assert pop.w == 51
    assert "extinct" in caplog.text
