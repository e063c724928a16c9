import argparse
import logging
import math
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

from .energy import energy_table
from .errors import PoUIError, UsageError
from .harness import run
from .loader import MAX_SEED, load_params, validate_params
from .sweep import SWEEPABLE_PARAMS, sweep, sweep_csv
from .trace import render_csv, write_atomic

logger = logging.getLogger(__name__)

PROG = "poui-sim"

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
LOG_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"

ENERGY_COLUMNS = ("mechanism", "e_sec_kwh", "e_use_kwh", "e_tot_kwh")
REDUCTION_COLUMNS = ("basis", "mechanism", "baseline", "reduction_pct")


@dataclass(frozen=True)
class Simulate:
    config_path: str
    out_path: str
    seed_override: Optional[int] = None
    verbose: bool = False


@dataclass(frozen=True)
class Energy:
    out_path: str
    reductions_path: Optional[str] = None
    verbose: bool = False

    def get_reductions_path(self) -> Path:
        if self.reductions_path:
            return Path(self.reductions_path)
        out = Path(self.out_path)
        return out.with_name(f"{out.stem}_reductions.csv")


@dataclass(frozen=True)
class Sweep:
    config_path: str
    param: str
    values: Tuple[float, ...]
    out_path: str
    verbose: bool = False


Command = Union[Simulate, Energy, Sweep]


# raises UsageError instead of exiting, so callers decide how a usage problem ends
class _ArgumentParser(argparse.ArgumentParser):

    def error(self, message):
        if message.startswith("unrecognized arguments") or message.startswith("argument command:"):
            kind = UsageError.UNKNOWN_FLAG
        elif message.startswith("the following arguments are required") or "expected one argument" in message:
            kind = UsageError.MISSING_ARGUMENT
        else:
            kind = UsageError.BAD_VALUE
        raise UsageError(kind, f"{self.format_usage()}{self.prog}: error: {message}")


def _path(text: str) -> str:
    if not text.strip():
        raise argparse.ArgumentTypeError("path must not be empty")
    return text


def _seed(text: str) -> int:
    try:
        seed = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid seed {text!r}") from None
    if not 0 <= seed <= MAX_SEED:
        raise argparse.ArgumentTypeError(f"seed {seed} is not an unsigned 64-bit integer")
    return seed


def _values(text: str) -> Tuple[float, ...]:
    values = []
    for item in text.split(","):
        try:
            value = float(item)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid value {item.strip()!r}") from None
        if not math.isfinite(value):
            raise argparse.ArgumentTypeError(f"value {item.strip()!r} is not finite")
        values.append(value)
    return tuple(values)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog=PROG, description="Proof of Useful Intelligence network simulator")
    commands = parser.add_subparsers(dest="command", metavar="command", required=True)

    simulate = commands.add_parser("simulate", help="run one simulation and write its trace")
    simulate.add_argument("--config", required=True, type=_path)
    simulate.add_argument("--out", required=True, type=_path)
    simulate.add_argument("--seed", type=_seed, help="overrides the seed of the config file")

    energy = commands.add_parser("energy", help="write the per-node energy comparison")
    energy.add_argument("--out", required=True, type=_path)
    energy.add_argument("--reductions-out", type=_path, help="defaults to <out stem>_reductions.csv")

    sweep_cmd = commands.add_parser("sweep", help="run one simulation per value of a controller gain")
    sweep_cmd.add_argument("--config", required=True, type=_path)
    sweep_cmd.add_argument("--param", required=True, choices=SWEEPABLE_PARAMS)
    sweep_cmd.add_argument("--values", required=True, type=_values, help="comma separated, e.g. 0.1,0.2,0.4")
    sweep_cmd.add_argument("--out", required=True, type=_path)

    for sub in (simulate, energy, sweep_cmd):
        sub.add_argument("--verbose", action="store_true", help="log at DEBUG level")
    return parser


def parse_args(argv: Sequence[str]) -> Command:
    args = build_parser().parse_args(list(argv))
    if args.command == "simulate":
        return Simulate(args.config, args.out, args.seed, args.verbose)
    if args.command == "energy":
        return Energy(args.out, args.reductions_out, args.verbose)
    return Sweep(args.config, args.param, args.values, args.out, args.verbose)


def execute(cmd: Command) -> int:
    try:
        if isinstance(cmd, Simulate):
            params = load_params(cmd.config_path)
            if cmd.seed_override is not None:
                params = validate_params(replace(params, seed=cmd.seed_override))
            run(params).write_csv(cmd.out_path)
            logger.info("trace written to %s", cmd.out_path)
        elif isinstance(cmd, Energy):
            table = energy_table()
            write_atomic(cmd.out_path, render_csv(
                ENERGY_COLUMNS, ((p.mechanism.value, p.e_sec, p.e_use, p.e_tot) for p in table.profiles)))
            write_atomic(cmd.get_reductions_path(), render_csv(
                REDUCTION_COLUMNS,
                ((r.basis, r.mechanism.value, r.baseline.value, r.reduction_pct) for r in table.reductions)))
            logger.info("energy table written to %s", cmd.out_path)
        else:
            params = load_params(cmd.config_path)
            write_atomic(cmd.out_path, sweep_csv(cmd.param, sweep(params, cmd.param, cmd.values)))
            logger.info("sweep summary written to %s", cmd.out_path)
    except (PoUIError, OSError) as e:
        print(f"{PROG}: error: {e}", file=sys.stderr)
        return 1
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cmd = parse_args(sys.argv[1:] if argv is None else argv)
    except UsageError as e:
        print(e, file=sys.stderr)
        return 2

    logging.basicConfig(level=logging.DEBUG if cmd.verbose else logging.INFO,
                        format=LOG_FORMAT, datefmt=LOG_DATE_FORMAT)
    return execute(cmd)
