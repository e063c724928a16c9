from typing import List

from .market import JobMarket
from .poui import CoinAmount, NodeId, Role
from .staking import StakeLedger


# Read-only questions about the ledger and market of a running simulation.
# Observers go through this reader instead of touching the mutable state directly.
class SnapshotReader:

    def __init__(self, ledger: StakeLedger, market: JobMarket, step: int):
        self._ledger = ledger
        self._market = market
        self.step = step

    def get_nodes_with_role(self, role: Role) -> List[NodeId]:
        return [a.node for a in self._ledger.accounts() if a.has_role(role)]

    def get_subsidy_pool(self) -> CoinAmount:
        return self._market.get_subsidy_pool()

    def get_live_escrow(self) -> CoinAmount:
        return self._market.live_escrow()

    def get_total_staked(self) -> CoinAmount:
        return self._ledger.total_staked()

    def get_total_coins(self) -> CoinAmount:
        return self._market.total_coins()

    def get_minted(self) -> CoinAmount:
        return self._ledger.minted()

    def is_conserved(self) -> bool:
        return self.get_total_coins() == self.get_minted()

    def get_mean_reputation(self) -> float:
        return self._ledger.mean_reputation()
