import logging
import math
import os
from dataclasses import fields, replace
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Dict, Mapping, Optional, Union

from . import specs
from .errors import ConfigError, EvenValidatorCount, RangeViolation
from .poui import SimParams, to_coins

logger = logging.getLogger(__name__)

# ENV_PREFIX prefixes the environment variables that override config file keys, e.g. POUI_SEED
ENV_PREFIX = "POUI_"

MAX_SEED = 2 ** 64 - 1

PARAM_NAMES = tuple(f.name for f in fields(SimParams))

INT_FIELDS = frozenset({
    "target_workers", "initial_workers", "steps", "seed", "worker_cap", "job_arrival_per_step",
    "validators_per_task", "validity_period", "runtime_requirement", "num_posters", "num_coordinators",
    "initial_validators",
})

COIN_FIELDS = frozenset({"stake_cap", "initial_validator_stake", "poster_endowment", "subsidy_pool"})


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _is_real(value) -> bool:
    return isinstance(value, (int, float, Decimal)) and not isinstance(value, bool) and math.isfinite(value)


def _require(field: str, value, ok: bool, allowed: str):
    if not ok:
        raise RangeViolation(field, value, allowed)


def _int_at_least(params: SimParams, field: str, low: int):
    value = getattr(params, field)
    _require(field, value, _is_int(value) and value >= low, f"integer >= {low}")


def _real(params: SimParams, field: str, low: float, high: float = math.inf,
          low_open: bool = False, high_open: bool = False):
    value = getattr(params, field)
    ok = _is_real(value)
    if ok:
        ok = (value > low if low_open else value >= low) and (value < high if high_open else value <= high)
    left = "(" if low_open else "["
    right = ")" if high_open or high == math.inf else "]"
    _require(field, value, ok, f"real in {left}{low}, {high}{right}")


# Constraints are checked in field declaration order, so a candidate yields exactly one diagnostic.
# Unset worker_cap and job_arrival_per_step are resolved to their defaults.
def validate_params(raw: Union[SimParams, Mapping[str, object]]) -> SimParams:
    if isinstance(raw, SimParams):
        params = raw
    else:
        unknown = sorted(set(raw) - set(PARAM_NAMES))
        if unknown:
            raise ConfigError(f"unknown parameter(s): {', '.join(unknown)}")
        params = SimParams(**raw)

    _int_at_least(params, "target_workers", 1)
    _int_at_least(params, "initial_workers", 1)
    _real(params, "initial_reward", 0, low_open=True)
    _real(params, "alpha", 0, low_open=True)
    _real(params, "delta", 0)
    _real(params, "beta", 0, low_open=True)
    _real(params, "gamma", 0, 1, high_open=True)
    _int_at_least(params, "steps", 1)
    _require("seed", params.seed, _is_int(params.seed) and 0 <= params.seed <= MAX_SEED, "unsigned 64-bit integer")

    if params.worker_cap is None:
        params = replace(params, worker_cap=specs.WORKER_CAP_FACTOR * params.target_workers)
    _int_at_least(params, "worker_cap", params.target_workers)
    if params.job_arrival_per_step is None:
        params = replace(params, job_arrival_per_step=params.target_workers)
    _int_at_least(params, "job_arrival_per_step", 0)

    _real(params, "coordinator_fee", 0, 1, high_open=True)
    _require("stake_cap", params.stake_cap, _is_real(params.stake_cap) and params.stake_cap >= 0, "coins >= 0")
    _real(params, "uniform_blend", 0, 1)
    _int_at_least(params, "validators_per_task", 1)
    if params.validators_per_task % 2 == 0:
        raise EvenValidatorCount(params.validators_per_task)
    _real(params, "quality_threshold", 0, 1)
    _real(params, "reputation_threshold", 0, 1)

    _real(params, "quality_noise", 0, 1)
    _real(params, "observation_noise", 0, 1)
    _real(params, "skill_low", 0, 1)
    _real(params, "skill_high", params.skill_low, 1)
    _int_at_least(params, "validity_period", 1)
    _int_at_least(params, "runtime_requirement", 1)
    _real(params, "public_good_share", 0, 1)
    _real(params, "fraud_rate", 0, 1)
    _int_at_least(params, "num_posters", 1)
    _int_at_least(params, "num_coordinators", 1)
    _int_at_least(params, "initial_validators", 0)
    for field in ("initial_validator_stake", "poster_endowment", "subsidy_pool"):
        value = getattr(params, field)
        _require(field, value, _is_real(value) and value >= 0, "coins >= 0")
    _real(params, "stake_fraction", 0, 1)
    _real(params, "steps_per_hour", 0, low_open=True)
    _real(params, "reward_floor", 0, low_open=True)
    _real(params, "validator_power_w", 0)
    _real(params, "worker_power_w", 0)
    return params


def coerce_value(key: str, text: str, where: str):
    text = text.strip()
    try:
        if key in INT_FIELDS:
            return int(text)
        if key in COIN_FIELDS:
            return to_coins(text)
        return float(text)
    except (ValueError, InvalidOperation):
        raise ConfigError(f"{where}: value {text!r} for {key} is not a valid number")


# Loads SimParams from a flat `key = value` file, then applies POUI_<FIELD> environment overrides.
class ConfigLoader:

    def __init__(self, path: Union[str, Path], environ: Optional[Mapping[str, str]] = None):
        self._path = Path(path)
        self._values: Dict[str, object] = {}

        try:
            text = self._path.read_text(encoding="utf-8")
        except (OSError, UnicodeDecodeError) as e:
            raise ConfigError(f"cannot read config {self._path}: {e}") from e

        for number, line in enumerate(text.splitlines(), start=1):
            where = f"{self._path}:{number}"
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{where}: expected 'key = value', got {line!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in PARAM_NAMES:
                raise ConfigError(f"{where}: unknown key {key!r}")
            self._values[key] = coerce_value(key, value, where)

        environ = os.environ if environ is None else environ
        for key in PARAM_NAMES:
            env_key = ENV_PREFIX + key.upper()
            if env_key in environ:
                logger.info("config key %s overridden by %s", key, env_key)
                self._values[key] = coerce_value(key, environ[env_key], env_key)

    def get_path(self) -> Path:
        return self._path

    def get_values(self) -> Dict[str, object]:
        return dict(self._values)

    def get_params(self) -> SimParams:
        return validate_params(self._values)


def load_params(path: Union[str, Path], environ: Optional[Mapping[str, str]] = None) -> SimParams:
    return ConfigLoader(path, environ).get_params()
