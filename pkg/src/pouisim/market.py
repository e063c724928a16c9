import itertools
import logging
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from . import specs
from .errors import (
    IllegalTransition, InsufficientPosterFunds, JobNotAvailable, MissingRole, NotYetDue, ScreeningRejected,
    SubsidyPoolExhausted, WrongStatus,
)
from .poui import (
    JOB_TRANSITIONS, ZERO_COINS, CoinAmount, JobSpec, JobStatus, NodeId, Role, Verdict,
    Visibility,
)
from .staking import StakeLedger

logger = logging.getLogger(__name__)

TransitionHook = Callable[["JobRecord", JobStatus, JobStatus], None]


@dataclass
class JobRecord:
    job_id: int
    spec: JobSpec
    poster: NodeId
    coordinator: NodeId
    posted_at: int
    # poster reputation seen by the coordinators when the job was screened
    screened_reputation: float
    status: JobStatus = JobStatus.POSTED
    worker: Optional[NodeId] = None
    accepted_at: Optional[int] = None
    completed_at: Optional[int] = None
    escrow: CoinAmount = ZERO_COINS
    latent_quality: Optional[float] = None
    # None while unfunded or when the subsidy pool paid the escrow
    funded_by: Optional[NodeId] = None

    def expires_at(self) -> int:
        return self.posted_at + self.spec.validity_period

    def due_at(self) -> Optional[int]:
        if self.accepted_at is None:
            return None
        return self.accepted_at + self.spec.runtime_requirement


@dataclass(frozen=True)
class ScreeningEntry:
    step: int
    poster: NodeId
    reputation: float
    reason: str


@dataclass(frozen=True)
class Payouts:
    job_id: int
    verdict: Verdict
    credits: Dict[NodeId, CoinAmount] = field(default_factory=dict)
    subsidy_refund: CoinAmount = ZERO_COINS

    def total(self) -> CoinAmount:
        return sum(self.credits.values(), ZERO_COINS) + self.subsidy_refund


# The synchronized job queue all coordinators share, plus the escrows and the subsidy pool.
# Balances live in the StakeLedger; the market only moves coins between it, the escrows and the pool.
class JobMarket:

    def __init__(self, ledger: StakeLedger, coordinators: Sequence[NodeId],
                 coordinator_fee: float = specs.DEFAULT_COORDINATOR_FEE,
                 reputation_threshold: float = specs.DEFAULT_REPUTATION_THRESHOLD,
                 quality_noise: float = specs.DEFAULT_QUALITY_NOISE,
                 on_transition: Optional[TransitionHook] = None):
        if not coordinators:
            raise ValueError("the market needs at least one coordinator")
        self.ledger = ledger
        self.coordinator_fee = Decimal(repr(coordinator_fee))
        self.reputation_threshold = reputation_threshold
        self.quality_noise = quality_noise
        self.on_transition = on_transition if on_transition is not None else (lambda job, old, new: None)
        # rate paid out of the pool for public good jobs posted without an offered reward
        self.subsidy_rate = ZERO_COINS

        self._next_coordinator = itertools.cycle(list(coordinators))
        self._job_ids = itertools.count(start=1)
        self._jobs: Dict[int, JobRecord] = {}
        self._queue: Dict[int, JobRecord] = {}
        self._in_progress: Dict[int, JobRecord] = {}
        self._worker_skills: Dict[NodeId, float] = {}
        self._subsidy_pool = ZERO_COINS
        self._escrow = ZERO_COINS
        self._screening_log: List[ScreeningEntry] = []
        self._last_post_step = None

    # ---- registry -------------------------------------------------------------------------------------------

    def register_worker(self, node: NodeId, skill: float):
        if not self.ledger.account(node).has_role(Role.WORKER):
            raise MissingRole(node, Role.WORKER)
        self._worker_skills[node] = skill

    # ---- subsidy pool ---------------------------------------------------------------------------------------

    def mint_subsidy(self, amount: CoinAmount, reason: str):
        self.ledger.record_mint(amount, reason)
        self._subsidy_pool += amount

    def get_subsidy_pool(self) -> CoinAmount:
        return self._subsidy_pool

    # ---- views ----------------------------------------------------------------------------------------------

    def get_job(self, job_id: int) -> JobRecord:
        try:
            return self._jobs[job_id]
        except KeyError:
            raise JobNotAvailable(job_id) from None

    def get_queue(self) -> List[JobRecord]:
        return list(self._queue.values())

    def get_in_progress(self) -> List[JobRecord]:
        return list(self._in_progress.values())

    def get_jobs(self) -> List[JobRecord]:
        return list(self._jobs.values())

    def get_screening_log(self) -> List[ScreeningEntry]:
        return list(self._screening_log)

    def pending_count(self) -> int:
        return len(self._queue)

    def live_escrow(self) -> CoinAmount:
        return self._escrow

    def total_coins(self) -> CoinAmount:
        return self.ledger.total() + self.live_escrow() + self._subsidy_pool

    # ---- lifecycle ------------------------------------------------------------------------------------------

    def _transition(self, job: JobRecord, new: JobStatus):
        old = job.status
        if new not in JOB_TRANSITIONS[old]:
            raise IllegalTransition(job.job_id, old, new)
        job.status = new
        self.on_transition(job, old, new)

    def post_job(self, spec: JobSpec, poster: NodeId, now: int, poster_reputation: float,
                 legitimate: bool = True) -> JobRecord:
        spec.validate()
        if not self.ledger.account(poster).has_role(Role.JOB_POSTER):
            raise MissingRole(poster, Role.JOB_POSTER)
        if self._last_post_step is not None and now < self._last_post_step:
            raise ValueError(f"jobs must be posted in step order, got {now} after {self._last_post_step}")

        reason = None
        if poster_reputation < self.reputation_threshold:
            reason = "reputation below threshold"
        elif not legitimate:
            reason = "illegitimate task"
        if reason is not None:
            self._screening_log.append(ScreeningEntry(now, poster, poster_reputation, reason))
            logger.info("step %d: rejected job from poster %s (%s)", now, poster, reason)
            raise ScreeningRejected(poster, poster_reputation, reason)

        self._last_post_step = now
        job = JobRecord(
            job_id=next(self._job_ids),
            spec=spec,
            poster=poster,
            coordinator=next(self._next_coordinator),
            posted_at=now,
            screened_reputation=poster_reputation,
        )
        self._jobs[job.job_id] = job
        self._queue[job.job_id] = job
        return job

    def accept_job(self, job_id: int, worker: NodeId, now: int) -> JobRecord:
        job = self._queue.get(job_id)
        if job is None or job.status != JobStatus.POSTED or now >= job.expires_at():
            raise JobNotAvailable(job_id)
        if not self.ledger.account(worker).has_role(Role.WORKER):
            raise MissingRole(worker, Role.WORKER)

        amount = job.spec.offered_reward
        if job.spec.visibility == Visibility.PUBLIC_GOOD:
            if amount == 0:
                amount = self.subsidy_rate
            if amount <= 0 or amount > self._subsidy_pool:
                raise SubsidyPoolExhausted(amount, self._subsidy_pool)
            self._subsidy_pool -= amount
            job.funded_by = None
        else:
            poster = self.ledger.account(job.poster)
            if amount > poster.balance:
                raise InsufficientPosterFunds(job.poster, amount, poster.balance)
            self.ledger.debit(job.poster, amount)
            job.funded_by = job.poster

        job.escrow = amount
        self._escrow += amount
        job.worker = worker
        job.accepted_at = now
        del self._queue[job_id]
        self._in_progress[job_id] = job
        self._transition(job, JobStatus.ACCEPTED)
        return job

    def complete_job(self, job_id: int, now: int, rng: np.random.Generator) -> JobRecord:
        job = self.get_job(job_id)
        if job.status != JobStatus.ACCEPTED:
            raise WrongStatus(job_id, job.status, JobStatus.ACCEPTED)
        if now < job.due_at():
            raise NotYetDue(job_id, job.due_at(), now)

        skill = self._worker_skills[job.worker]
        noise = rng.uniform(-self.quality_noise, self.quality_noise)
        job.latent_quality = float(np.clip(skill + noise, 0.0, 1.0))
        job.completed_at = now
        self._transition(job, JobStatus.COMPLETED)
        return job

    def expire_jobs(self, now: int) -> List[JobRecord]:
        expired = [job for job in self._queue.values() if now >= job.expires_at()]
        for job in expired:
            del self._queue[job.job_id]
            self._transition(job, JobStatus.EXPIRED)
        return expired

    def settle_escrow(self, job_id: int, verdict: Verdict) -> Payouts:
        job = self.get_job(job_id)
        if job.status != JobStatus.COMPLETED:
            raise WrongStatus(job_id, job.status, JobStatus.COMPLETED)

        escrow = job.escrow
        self._escrow -= escrow
        if verdict == Verdict.VALIDATED:
            fee = (escrow * self.coordinator_fee).quantize(specs.COIN_QUANTUM, rounding=ROUND_HALF_EVEN)
            earned = escrow - fee
            self.ledger.credit(job.worker, earned)
            self.ledger.credit(job.coordinator, fee)
            credits = {job.worker: earned}
            credits[job.coordinator] = credits.get(job.coordinator, ZERO_COINS) + fee
            payouts = Payouts(job_id, verdict, credits=credits)
            job.escrow = ZERO_COINS
            self._transition(job, JobStatus.VALIDATED)
            self._transition(job, JobStatus.SETTLED)
        else:
            if job.funded_by is None:
                self._subsidy_pool += escrow
                payouts = Payouts(job_id, verdict, subsidy_refund=escrow)
            else:
                self.ledger.credit(job.funded_by, escrow)
                payouts = Payouts(job_id, verdict, credits={job.funded_by: escrow})
            job.escrow = ZERO_COINS
            self._transition(job, JobStatus.REJECTED)

        del self._in_progress[job_id]
        return payouts
