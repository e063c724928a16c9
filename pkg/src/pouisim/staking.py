import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import numpy as np

from . import specs
from .errors import InsufficientFunds, InsufficientValidators, SelfValidation, UnknownNode, WrongStatus
from .poui import (
    EVENT_SCORES, ZERO_COINS, CoinAmount, JobStatus, NodeId, ReputationEvent, Role, Verdict, Vote,
)

logger = logging.getLogger(__name__)


@dataclass
class Account:
    node: NodeId
    roles: Set[Role] = field(default_factory=set)
    balance: CoinAmount = ZERO_COINS
    staked: CoinAmount = ZERO_COINS
    reputation: float = specs.INITIAL_REPUTATION

    def has_role(self, role: Role) -> bool:
        return role in self.roles


@dataclass(frozen=True)
class MintEvent:
    amount: CoinAmount
    reason: str
    # None when the coins go to the market subsidy pool
    node: Optional[NodeId] = None


# Per-node balances, stakes and reputation scores.
# Coins only enter through mint events; every other operation moves them between a balance, a stake or
# (through the job market) an escrow. Circulating coins and the set of staked nodes are kept as running
# values so per-step checks never walk every account.
class StakeLedger:

    def __init__(self):
        self._accounts: Dict[NodeId, Account] = {}
        self._minted = ZERO_COINS
        self._circulating = ZERO_COINS
        self._stakers: Set[NodeId] = set()
        self._mint_log: List[MintEvent] = []

    def add_node(self, node: NodeId, roles: Iterable[Role], reputation: float = specs.INITIAL_REPUTATION) -> Account:
        if node in self._accounts:
            raise ValueError(f"node {node} already exists")
        account = Account(node=node, roles=set(roles), reputation=_clamp(reputation))
        self._accounts[node] = account
        return account

    def account(self, node: NodeId) -> Account:
        try:
            return self._accounts[node]
        except KeyError:
            raise UnknownNode(node) from None

    def accounts(self) -> Iterator[Account]:
        for node in sorted(self._accounts):
            yield self._accounts[node]

    def stakers(self) -> Iterator[Account]:
        # nodes with a positive stake, in id order
        for node in sorted(self._stakers):
            yield self._accounts[node]

    def __len__(self) -> int:
        return len(self._accounts)

    def grant_role(self, node: NodeId, role: Role):
        self.account(node).roles.add(role)

    def credit(self, node: NodeId, amount: CoinAmount):
        _check_amount(amount)
        account = self.account(node)
        account.balance += amount
        self._circulating += amount

    def debit(self, node: NodeId, amount: CoinAmount):
        _check_amount(amount)
        account = self.account(node)
        if amount > account.balance:
            raise InsufficientFunds(node, amount, account.balance)
        account.balance -= amount
        self._circulating -= amount

    def lock(self, node: NodeId, amount: CoinAmount):
        _check_amount(amount)
        account = self.account(node)
        if amount > account.balance:
            raise InsufficientFunds(node, amount, account.balance)
        account.balance -= amount
        account.staked += amount
        if account.staked > 0:
            self._stakers.add(node)

    def release(self, node: NodeId, amount: CoinAmount):
        _check_amount(amount)
        account = self.account(node)
        if amount > account.staked:
            raise InsufficientFunds(node, amount, account.staked)
        account.staked -= amount
        account.balance += amount
        if account.staked == 0:
            self._stakers.discard(node)

    def mint(self, node: NodeId, amount: CoinAmount, reason: str):
        self.credit(node, amount)
        self.record_mint(amount, reason, node)

    def record_mint(self, amount: CoinAmount, reason: str, node: Optional[NodeId] = None):
        _check_amount(amount)
        self._minted += amount
        self._mint_log.append(MintEvent(amount=amount, reason=reason, node=node))
        logger.info("minted %s coins to %s (%s)", amount, "subsidy pool" if node is None else f"node {node}", reason)

    def minted(self) -> CoinAmount:
        return self._minted

    def mint_log(self) -> Tuple[MintEvent, ...]:
        return tuple(self._mint_log)

    def total(self) -> CoinAmount:
        # balances plus stakes
        return self._circulating

    def total_staked(self) -> CoinAmount:
        return sum((a.staked for a in self.stakers()), ZERO_COINS)

    def mean_reputation(self) -> float:
        if not self._accounts:
            return 0.0
        return float(np.mean([a.reputation for a in self._accounts.values()]))


def _check_amount(amount: CoinAmount):
    if amount < 0:
        raise ValueError(f"coin amounts must be non-negative, got {amount}")


def _clamp(value: float, low: float = 0.0, high: float = 1.0) -> float:
    return min(max(value, low), high)


def stake(ledger: StakeLedger, node: NodeId, amount: CoinAmount) -> StakeLedger:
    ledger.lock(node, amount)
    return ledger


def unstake(ledger: StakeLedger, node: NodeId, amount: CoinAmount) -> StakeLedger:
    ledger.release(node, amount)
    return ledger


def update_reputation(ledger: StakeLedger, node: NodeId, event: ReputationEvent) -> float:
    account = ledger.account(node)
    score = EVENT_SCORES[event]
    account.reputation = _clamp(
        specs.REPUTATION_RETENTION * account.reputation + specs.REPUTATION_EVENT_WEIGHT * score)
    return account.reputation


def effective_weight(staked: CoinAmount, stake_cap: CoinAmount) -> CoinAmount:
    return min(staked, stake_cap)


# Eligible validators and their capped weights, frozen at construction.
# A node is eligible when it has a positive stake and a reputation at or above the threshold.
# Nodes keep ledger id order, so equal seeds give equal panels.
class ValidatorPool:

    def __init__(self, nodes: Sequence[NodeId], weights: Sequence[CoinAmount]):
        if len(nodes) != len(weights):
            raise ValueError("nodes and weights must have the same length")
        self._nodes = list(nodes)
        self._index = {node: i for i, node in enumerate(self._nodes)}
        self._weights = np.array([float(w) for w in weights], dtype=float)
        self._total_weight = float(self._weights.sum())

    @classmethod
    def from_ledger(cls, ledger: StakeLedger, stake_cap: CoinAmount, reputation_threshold: float) -> "ValidatorPool":
        eligible = [a for a in ledger.stakers() if a.reputation >= reputation_threshold]
        return cls([a.node for a in eligible], [effective_weight(a.staked, stake_cap) for a in eligible])

    def __len__(self) -> int:
        return len(self._nodes)

    def get_nodes(self) -> List[NodeId]:
        return list(self._nodes)

    def _excluded_index(self, exclude: Optional[NodeId]) -> Optional[int]:
        return None if exclude is None else self._index.get(exclude)

    # first-draw selection probability of every pool node (zero for the excluded one)
    def probabilities(self, uniform_blend: float, exclude: Optional[NodeId] = None) -> np.ndarray:
        skip = self._excluded_index(exclude)
        n = len(self._nodes) - (skip is not None)
        if n == 0:
            return np.zeros(len(self._nodes))
        uniform = np.full(len(self._nodes), 1.0 / n)
        weights = self._weights
        total = self._total_weight
        if skip is not None:
            uniform[skip] = 0.0
            weights = weights.copy()
            total -= weights[skip]
            weights[skip] = 0.0
        by_stake = weights / total if total > 0 else uniform
        return uniform_blend * uniform + (1.0 - uniform_blend) * by_stake

    def select(self, k: int, exclude: Optional[NodeId], uniform_blend: float, rng: np.random.Generator) -> List[NodeId]:
        available = len(self._nodes) - (self._excluded_index(exclude) is not None)
        if available < k:
            raise InsufficientValidators(k, available)

        probs = self.probabilities(uniform_blend, exclude)
        cdf = np.cumsum(probs)
        left = float(cdf[-1]) if len(cdf) else 0.0
        picked: List[int] = []
        for _ in range(k):
            # a draw over the mass still left, stepped past the intervals of nodes already picked
            target = rng.random() * left
            for idx in sorted(picked):
                if target >= cdf[idx] - probs[idx]:
                    target += probs[idx]
                else:
                    break
            idx = int(np.searchsorted(cdf, target, side="right"))
            if idx >= len(cdf) or probs[idx] == 0.0 or idx in picked:
                idx = next(i for i in reversed(range(len(cdf))) if probs[i] > 0.0 and i not in picked)
            picked.append(idx)
            left -= float(probs[idx])
        return [self._nodes[idx] for idx in picked]


def select_validators(ledger: StakeLedger, k: int, exclude: Optional[NodeId], uniform_blend: float,
                      rng: np.random.Generator, *, stake_cap: CoinAmount = specs.DEFAULT_STAKE_CAP,
                      reputation_threshold: float = specs.DEFAULT_REPUTATION_THRESHOLD) -> List[NodeId]:
    return ValidatorPool.from_ledger(ledger, stake_cap, reputation_threshold).select(k, exclude, uniform_blend, rng)


@dataclass(frozen=True)
class ValidationOutcome:
    job_id: int
    panel: Tuple[NodeId, ...]
    votes: Tuple[Vote, ...]
    verdict: Verdict

    def approvals(self) -> int:
        return sum(1 for vote in self.votes if vote == Vote.APPROVE)

    def agrees(self, vote: Vote) -> bool:
        return (vote == Vote.APPROVE) == (self.verdict == Verdict.VALIDATED)


def majority_verdict(votes: Sequence[Vote]) -> Verdict:
    approvals = sum(1 for vote in votes if vote == Vote.APPROVE)
    return Verdict.VALIDATED if 2 * approvals > len(votes) else Verdict.REJECTED


def validate_output(job, panel: Sequence[NodeId], quality_threshold: float, rng: np.random.Generator,
                    observation_noise: float = specs.DEFAULT_OBSERVATION_NOISE) -> ValidationOutcome:
    if job.status != JobStatus.COMPLETED:
        raise WrongStatus(job.job_id, job.status, JobStatus.COMPLETED)
    if job.worker in panel:
        raise SelfValidation(job.worker)

    noise = rng.uniform(-observation_noise, observation_noise, size=len(panel))
    observed = np.clip(job.latent_quality + noise, 0.0, 1.0)
    votes = tuple(Vote.APPROVE if q >= quality_threshold else Vote.REJECT for q in observed)
    return ValidationOutcome(job_id=job.job_id, panel=tuple(panel), votes=votes, verdict=majority_verdict(votes))
