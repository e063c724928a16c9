import itertools
import logging
from dataclasses import dataclass, field, fields
from decimal import ROUND_DOWN, Decimal
from typing import Iterator, List, Optional, Set, Tuple

import numpy as np

from . import specs
from .controller import RewardState, WorkerPopulation, advance
from .energy import watts_to_kwh
from .errors import (
    ConservationViolation, InsufficientPosterFunds, InsufficientValidators, PoUIError, ScreeningRejected,
    StepError, SubsidyPoolExhausted,
)
from .interface import NullObserver, SimulationObserver
from .market import JobMarket, JobRecord
from .poui import (
    ZERO_COINS, JobSpec, JobStatus, JobType, NodeId, ReputationEvent, Role, SimParams, Verdict, Visibility,
    to_coins,
)
from .snapshot import SnapshotReader
from .staking import StakeLedger, ValidationOutcome, ValidatorPool, stake, update_reputation, validate_output
from .trace import SimTrace, TraceRow

logger = logging.getLogger(__name__)


# independent generators, one per concern, spawned from a single seed
@dataclass
class RngStreams:
    arrivals: np.random.Generator
    quality: np.random.Generator
    selection: np.random.Generator
    population: np.random.Generator
    skills: np.random.Generator

    @classmethod
    def from_seed(cls, seed: int) -> "RngStreams":
        children = np.random.SeedSequence(seed).spawn(len(fields(cls)))
        return cls(*(np.random.default_rng(child) for child in children))


@dataclass
class SimState:
    params: SimParams
    ledger: StakeLedger
    market: JobMarket
    reward: RewardState
    population: WorkerPopulation
    posters: List[NodeId] = field(default_factory=list)
    # active workers, oldest first; ids only ever increase
    workers: List[NodeId] = field(default_factory=list)
    step: int = 0
    energy_kwh: float = 0.0
    node_ids: Iterator[int] = field(default_factory=itertools.count)

    def new_node(self, roles) -> NodeId:
        node = NodeId(next(self.node_ids))
        self.ledger.add_node(node, roles)
        return node

    def reader(self) -> SnapshotReader:
        return SnapshotReader(self.ledger, self.market, self.step)


def hire_workers(state: SimState, count: int, rng: np.random.Generator):
    for _ in range(count):
        node = state.new_node({Role.WORKER})
        state.market.register_worker(node, float(rng.uniform(state.params.skill_low, state.params.skill_high)))
        state.workers.append(node)


def retire_workers(state: SimState, count: int):
    # the most recently added workers leave first; a retiring worker still finishes the job it holds
    if count > 0:
        del state.workers[-count:]


def initial_state(params: SimParams, streams: RngStreams,
                  observer: Optional[SimulationObserver] = None) -> SimState:
    observer = observer if observer is not None else NullObserver()
    ledger = StakeLedger()
    node_ids = itertools.count()

    def add(roles) -> NodeId:
        node = NodeId(next(node_ids))
        ledger.add_node(node, roles)
        return node

    coordinators = [add({Role.MARKET_COORDINATOR}) for _ in range(params.num_coordinators)]
    market = JobMarket(
        ledger,
        coordinators,
        coordinator_fee=params.coordinator_fee,
        reputation_threshold=params.reputation_threshold,
        quality_noise=params.quality_noise,
        on_transition=observer.on_transition,
    )

    posters = []
    for _ in range(params.num_posters):
        poster = add({Role.JOB_POSTER})
        if params.poster_endowment > 0:
            ledger.mint(poster, to_coins(params.poster_endowment), "poster endowment")
        posters.append(poster)

    for _ in range(params.initial_validators):
        validator = add({Role.VALIDATOR})
        if params.initial_validator_stake > 0:
            amount = to_coins(params.initial_validator_stake)
            ledger.mint(validator, amount, "genesis validator stake")
            stake(ledger, validator, amount)

    if params.subsidy_pool > 0:
        market.mint_subsidy(to_coins(params.subsidy_pool), "public good subsidy pool")

    state = SimState(
        params=params,
        ledger=ledger,
        market=market,
        reward=RewardState(r=params.initial_reward, alpha=params.alpha, delta=params.delta,
                           r_min=params.reward_floor),
        population=WorkerPopulation(w=params.initial_workers, target=params.target_workers, beta=params.beta,
                                    gamma=params.gamma, cap=params.worker_cap),
        posters=posters,
        node_ids=node_ids,
    )
    hire_workers(state, params.initial_workers, streams.skills)
    return state


def _post_arrivals(state: SimState, offered, rng: np.random.Generator):
    params, market, ledger = state.params, state.market, state.ledger
    screened_out = 0
    for _ in range(params.job_arrival_per_step):
        poster = state.posters[int(rng.integers(len(state.posters)))]
        public_good = rng.random() < params.public_good_share
        legitimate = rng.random() >= params.fraud_rate
        job_type = JobType(int(rng.integers(len(JobType))))
        spec = JobSpec(
            job_type=job_type,
            description=f"normalized {job_type.name.lower()} job",
            validity_period=params.validity_period,
            runtime_requirement=params.runtime_requirement,
            visibility=Visibility.PUBLIC_GOOD if public_good else Visibility.PRIVATE,
            offered_reward=ZERO_COINS if public_good else offered,
        )
        try:
            market.post_job(spec, poster, state.step, ledger.account(poster).reputation, legitimate)
        except ScreeningRejected:
            update_reputation(ledger, poster, ReputationEvent.SCREENING_REJECTION)
            screened_out += 1
    if screened_out:
        logger.debug("step %d: %d of %d arriving job(s) screened out", state.step, screened_out,
                     params.job_arrival_per_step)


# pairs idle workers (by id) with posted jobs (FIFO); jobs nobody can fund stay posted
def _match_workers(state: SimState) -> List[JobRecord]:
    now, market, ledger = state.step, state.market, state.ledger
    busy = {job.worker for job in market.get_in_progress()
            if job.status == JobStatus.ACCEPTED and job.due_at() > now}
    idle = [w for w in sorted(state.workers)
            if w not in busy and ledger.account(w).reputation >= state.params.reputation_threshold]

    queue = iter(market.get_queue())
    accepted, unfunded = [], 0
    for worker in idle:
        for job in queue:
            try:
                accepted.append(market.accept_job(job.job_id, worker, now))
                break
            except (InsufficientPosterFunds, SubsidyPoolExhausted):
                unfunded += 1
        else:
            break
    if unfunded:
        logger.warning("step %d: %d job(s) could not be funded and stay posted", now, unfunded)
    return accepted


def _validate(state: SimState, pool: ValidatorPool, streams: RngStreams,
              observer: SimulationObserver) -> List[Tuple[JobRecord, ValidationOutcome]]:
    params = state.params
    waiting = sorted((job for job in state.market.get_in_progress() if job.status == JobStatus.COMPLETED),
                     key=lambda job: job.job_id)
    outcomes, short = [], 0
    for job in waiting:
        try:
            panel = pool.select(params.validators_per_task, job.worker, params.uniform_blend, streams.selection)
        except InsufficientValidators:
            short += 1
            continue
        outcome = validate_output(job, panel, params.quality_threshold, streams.quality, params.observation_noise)
        observer.on_validation(job, outcome)
        outcomes.append((job, outcome))
    if short:
        logger.warning("step %d: %d completed job(s) wait for a validator panel (pool of %d)",
                       state.step, short, len(pool))
    return outcomes


def _settle(state: SimState, job: JobRecord, outcome: ValidationOutcome):
    params, ledger = state.params, state.ledger
    payouts = state.market.settle_escrow(job.job_id, outcome.verdict)

    if outcome.verdict == Verdict.VALIDATED:
        update_reputation(ledger, job.worker, ReputationEvent.VALIDATED_WORK)
        update_reputation(ledger, job.poster, ReputationEvent.HONEST_COMPLETION)
        share = (payouts.credits[job.worker] * Decimal(repr(params.stake_fraction))).quantize(
            specs.COIN_QUANTUM, rounding=ROUND_DOWN)
        if share > 0:
            stake(ledger, job.worker, share)
            ledger.grant_role(job.worker, Role.VALIDATOR)
    else:
        update_reputation(ledger, job.worker, ReputationEvent.REJECTED_WORK)

    for node, vote in zip(outcome.panel, outcome.votes):
        if outcome.agrees(vote):
            update_reputation(ledger, node, ReputationEvent.HONEST_COMPLETION)


def step(state: SimState, streams: RngStreams, observer: Optional[SimulationObserver] = None) -> TraceRow:
    observer = observer if observer is not None else NullObserver()
    params, market, ledger = state.params, state.market, state.ledger
    now = state.step
    reward_now, workers_now = state.reward.r, state.population.w

    offered = max(to_coins(reward_now), specs.COIN_QUANTUM)
    market.subsidy_rate = offered

    _post_arrivals(state, offered, streams.arrivals)
    expired = market.expire_jobs(now)
    _match_workers(state)

    due = sorted((job for job in market.get_in_progress()
                  if job.status == JobStatus.ACCEPTED and job.due_at() <= now), key=lambda job: job.job_id)
    completed = [market.complete_job(job.job_id, now, streams.quality) for job in due]

    pool = ValidatorPool.from_ledger(ledger, params.stake_cap, params.reputation_threshold)
    outcomes = _validate(state, pool, streams, observer)
    for job, outcome in outcomes:
        _settle(state, job, outcome)

    state.reward, state.population = advance(state.reward, state.population, streams.population)
    change = state.population.w - len(state.workers)
    if change > 0:
        hire_workers(state, change, streams.skills)
    else:
        retire_workers(state, -change)

    working: Set[NodeId] = {job.worker for job in completed}
    working.update(job.worker for job in market.get_in_progress() if job.status == JobStatus.ACCEPTED)
    hours = 1.0 / params.steps_per_hour
    state.energy_kwh += (len(working) * watts_to_kwh(params.worker_power_w, hours)
                         + len(pool) * watts_to_kwh(params.validator_power_w, hours))

    accounted = market.total_coins()
    if accounted != ledger.minted():
        raise ConservationViolation(ledger.minted(), accounted)

    validated = sum(1 for _, outcome in outcomes if outcome.verdict == Verdict.VALIDATED)
    row = TraceRow(
        step=now,
        reward=reward_now,
        workers=workers_now,
        target_workers=params.target_workers,
        pending_jobs=market.pending_count(),
        completed_this_step=len(completed),
        expired_this_step=len(expired),
        validated_this_step=validated,
        rejected_this_step=len(outcomes) - validated,
        total_energy_kwh=state.energy_kwh,
        mean_reputation=ledger.mean_reputation(),
        subsidy_pool=float(market.get_subsidy_pool()),
    )
    observer.on_step(now, state.reader(), row)
    state.step += 1
    return row


# params must come from validate_params
def run(params: SimParams, observer: Optional[SimulationObserver] = None) -> SimTrace:
    streams = RngStreams.from_seed(params.seed)
    state = initial_state(params, streams, observer)
    trace = SimTrace()
    logger.info("run started: seed=%d steps=%d", params.seed, params.steps)
    for _ in range(params.steps):
        try:
            trace.append(step(state, streams, observer))
        except PoUIError as e:
            raise StepError(state.step, e) from e
    logger.info("run finished: %d rows", len(trace))
    return trace
