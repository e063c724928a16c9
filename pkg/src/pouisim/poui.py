from dataclasses import dataclass
from decimal import Decimal, ROUND_HALF_EVEN
from enum import IntEnum
from typing import NewType, Optional, Union

from . import specs
from .errors import RangeViolation

# NodeId names one functional node. Ids are allocated in increasing order, which gives every run a stable ordering.
NodeId = NewType("NodeId", int)

# CoinAmount is a non-negative fixed-point amount quantized to specs.COIN_QUANTUM
CoinAmount = Decimal

ZERO_COINS = Decimal(0).quantize(specs.COIN_QUANTUM)


def to_coins(value: Union[int, float, str, Decimal]) -> CoinAmount:
    if isinstance(value, float):
        value = repr(value)
    raw = Decimal(value)
    if not raw.is_finite():
        raise ValueError(f"coin amounts must be finite, got {value}")
    amount = raw.quantize(specs.COIN_QUANTUM, rounding=ROUND_HALF_EVEN)
    if amount < 0:
        raise ValueError(f"coin amounts must be non-negative, got {value}")
    return amount


class Role(IntEnum):
    JOB_POSTER = 0
    MARKET_COORDINATOR = 1
    WORKER = 2
    VALIDATOR = 3


class JobType(IntEnum):
    TEXT_GENERATION = 0
    IMAGE_GENERATION = 1
    IMAGE_PROCESSING = 2
    FACT_CHECKING = 3


class Visibility(IntEnum):
    PRIVATE = 0
    PUBLIC_GOOD = 1


class JobStatus(IntEnum):
    POSTED = 0
    ACCEPTED = 1
    COMPLETED = 2
    VALIDATED = 3
    REJECTED = 4
    EXPIRED = 5
    SETTLED = 6


# the only edges a job may ever take
JOB_TRANSITIONS = {
    JobStatus.POSTED: frozenset({JobStatus.ACCEPTED, JobStatus.EXPIRED}),
    JobStatus.ACCEPTED: frozenset({JobStatus.COMPLETED}),
    JobStatus.COMPLETED: frozenset({JobStatus.VALIDATED, JobStatus.REJECTED}),
    JobStatus.VALIDATED: frozenset({JobStatus.SETTLED}),
    JobStatus.REJECTED: frozenset(),
    JobStatus.EXPIRED: frozenset(),
    JobStatus.SETTLED: frozenset(),
}

TERMINAL_STATUSES = frozenset({JobStatus.REJECTED, JobStatus.EXPIRED, JobStatus.SETTLED})


class Vote(IntEnum):
    APPROVE = 0
    REJECT = 1


class Verdict(IntEnum):
    VALIDATED = 0
    REJECTED = 1


class ReputationEvent(IntEnum):
    HONEST_COMPLETION = 0
    VALIDATED_WORK = 1
    REJECTED_WORK = 2
    SCREENING_REJECTION = 3


EVENT_SCORES = {
    ReputationEvent.HONEST_COMPLETION: 1.0,
    ReputationEvent.VALIDATED_WORK: 1.0,
    ReputationEvent.REJECTED_WORK: 0.0,
    ReputationEvent.SCREENING_REJECTION: 0.0,
}


@dataclass(frozen=True)
class JobSpec:
    job_type: JobType
    description: str
    validity_period: int
    runtime_requirement: int
    visibility: Visibility
    offered_reward: CoinAmount

    def validate(self) -> "JobSpec":
        if self.validity_period < 1:
            raise RangeViolation("validity_period", self.validity_period, ">= 1")
        if self.runtime_requirement < 1:
            raise RangeViolation("runtime_requirement", self.runtime_requirement, ">= 1")
        if self.offered_reward < 0:
            raise RangeViolation("offered_reward", self.offered_reward, ">= 0")
        if self.visibility == Visibility.PRIVATE and self.offered_reward <= 0:
            raise RangeViolation("offered_reward", self.offered_reward, "> 0 for private jobs")
        return self


@dataclass(frozen=True)
class SimParams:
    target_workers: int = specs.DEFAULT_TARGET_WORKERS
    initial_workers: int = specs.DEFAULT_INITIAL_WORKERS
    initial_reward: float = specs.DEFAULT_INITIAL_REWARD
    alpha: float = specs.DEFAULT_ALPHA
    delta: float = specs.DEFAULT_DELTA
    beta: float = specs.DEFAULT_BETA
    gamma: float = specs.DEFAULT_GAMMA
    steps: int = specs.DEFAULT_STEPS
    seed: int = 0
    # None means WORKER_CAP_FACTOR * target_workers, resolved by validate_params
    worker_cap: Optional[int] = None
    # None means one job per target worker per step
    job_arrival_per_step: Optional[int] = None
    coordinator_fee: float = specs.DEFAULT_COORDINATOR_FEE
    stake_cap: CoinAmount = specs.DEFAULT_STAKE_CAP
    uniform_blend: float = specs.DEFAULT_UNIFORM_BLEND
    validators_per_task: int = specs.DEFAULT_VALIDATORS_PER_TASK
    quality_threshold: float = specs.DEFAULT_QUALITY_THRESHOLD
    reputation_threshold: float = specs.DEFAULT_REPUTATION_THRESHOLD

    quality_noise: float = specs.DEFAULT_QUALITY_NOISE
    observation_noise: float = specs.DEFAULT_OBSERVATION_NOISE
    skill_low: float = specs.DEFAULT_SKILL_LOW
    skill_high: float = specs.DEFAULT_SKILL_HIGH
    validity_period: int = specs.DEFAULT_VALIDITY_PERIOD
    runtime_requirement: int = specs.DEFAULT_RUNTIME_REQUIREMENT
    public_good_share: float = specs.DEFAULT_PUBLIC_GOOD_SHARE
    fraud_rate: float = specs.DEFAULT_FRAUD_RATE
    num_posters: int = specs.DEFAULT_NUM_POSTERS
    num_coordinators: int = specs.DEFAULT_NUM_COORDINATORS
    initial_validators: int = specs.DEFAULT_INITIAL_VALIDATORS
    initial_validator_stake: CoinAmount = specs.DEFAULT_INITIAL_VALIDATOR_STAKE
    poster_endowment: CoinAmount = specs.DEFAULT_POSTER_ENDOWMENT
    subsidy_pool: CoinAmount = specs.DEFAULT_SUBSIDY_POOL
    stake_fraction: float = specs.DEFAULT_STAKE_FRACTION
    steps_per_hour: float = specs.DEFAULT_STEPS_PER_HOUR
    reward_floor: float = specs.REWARD_FLOOR
    validator_power_w: float = specs.VALIDATOR_POWER_W
    worker_power_w: float = specs.WORKER_POWER_W
