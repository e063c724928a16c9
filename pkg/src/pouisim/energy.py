# Per-node hourly energy of PoW, PoS and PoUI, split into security energy and useful-work energy.
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Tuple

from . import specs
from .errors import RangeViolation


class Mechanism(str, Enum):
    POW = "PoW"
    POS = "PoS"
    POUI = "PoUI"


@dataclass(frozen=True)
class EnergyProfile:
    mechanism: Mechanism
    e_sec: float
    e_use: float
    e_tot: float


@dataclass(frozen=True)
class MinerSpec:
    hash_rate: float
    energy_per_hash: float

    def __post_init__(self):
        if self.hash_rate < 0:
            raise RangeViolation("hash_rate", self.hash_rate, ">= 0")
        if self.energy_per_hash < 0:
            raise RangeViolation("energy_per_hash", self.energy_per_hash, ">= 0")


@dataclass(frozen=True)
class EnergyConfig:
    miner: MinerSpec = MinerSpec(specs.ANTMINER_HASH_RATE, specs.ANTMINER_ENERGY_PER_HASH)
    validator_power_w: float = specs.VALIDATOR_POWER_W
    worker_power_w: float = specs.WORKER_POWER_W
    hours: float = 1.0


@dataclass(frozen=True)
class Reduction:
    basis: str
    mechanism: Mechanism
    baseline: Mechanism
    reduction_pct: float


@dataclass(frozen=True)
class EnergyTable:
    profiles: Tuple[EnergyProfile, ...]
    reductions: Tuple[Reduction, ...]

    def get_profile(self, mechanism: Mechanism) -> EnergyProfile:
        for profile in self.profiles:
            if profile.mechanism == mechanism:
                return profile
        raise KeyError(mechanism)

    def get_reduction(self, basis: str, mechanism: Mechanism) -> float:
        for reduction in self.reductions:
            if reduction.basis == basis and reduction.mechanism == mechanism:
                return reduction.reduction_pct
        raise KeyError((basis, mechanism))


def joules_to_kwh(joules: float) -> float:
    return joules / specs.JOULES_PER_KWH


def watts_to_kwh(watts: float, hours: float) -> float:
    return joules_to_kwh(watts * hours * specs.SECONDS_PER_HOUR)


def pow_energy(spec: MinerSpec, hours: float = 1.0) -> EnergyProfile:
    e_sec = joules_to_kwh(spec.hash_rate * spec.energy_per_hash * specs.SECONDS_PER_HOUR * hours)
    return EnergyProfile(Mechanism.POW, e_sec=e_sec, e_use=0.0, e_tot=e_sec)


def pos_energy(p_val: float, t: float) -> EnergyProfile:
    if p_val < 0:
        raise RangeViolation("p_val", p_val, ">= 0")
    if t < 0:
        raise RangeViolation("t", t, ">= 0")
    e_sec = watts_to_kwh(p_val, t)
    return EnergyProfile(Mechanism.POS, e_sec=e_sec, e_use=0.0, e_tot=e_sec)


def poui_energy(k_sec: float, k_use: float, e_sec: float, e_use: float) -> EnergyProfile:
    for name, weight in (("k_sec", k_sec), ("k_use", k_use)):
        if not 0.0 <= weight <= 1.0:
            raise RangeViolation(name, weight, "[0, 1]")
    return EnergyProfile(Mechanism.POUI, e_sec=e_sec, e_use=e_use, e_tot=k_sec * e_sec + k_use * e_use)


def reduction_pct(baseline: float, value: float) -> float:
    return (baseline - value) / baseline * 100.0


# PoUI energy of a node by the roles it plays during the hour
def poui_role_profiles(config: EnergyConfig = EnergyConfig()) -> Dict[str, EnergyProfile]:
    e_sec = pos_energy(config.validator_power_w, config.hours).e_sec
    e_use = watts_to_kwh(config.worker_power_w, config.hours)
    return {
        "validator": poui_energy(1.0, 0.0, e_sec, e_use),
        "worker": poui_energy(0.0, 1.0, e_sec, e_use),
        "worker+validator": poui_energy(1.0, 1.0, e_sec, e_use),
    }


def energy_table(config: EnergyConfig = EnergyConfig()) -> EnergyTable:
    pow_profile = pow_energy(config.miner, config.hours)
    pos_profile = pos_energy(config.validator_power_w, config.hours)
    poui_profile = poui_role_profiles(config)["worker+validator"]

    reductions: List[Reduction] = []
    for basis, attr in (("security", "e_sec"), ("total", "e_tot")):
        baseline = getattr(pow_profile, attr)
        for profile in (pos_profile, poui_profile):
            reductions.append(Reduction(basis, profile.mechanism, Mechanism.POW,
                                        reduction_pct(baseline, getattr(profile, attr))))
    return EnergyTable(profiles=(pow_profile, pos_profile, poui_profile), reductions=tuple(reductions))
