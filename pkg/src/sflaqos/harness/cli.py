"""Command line entry point.

Exit status is 0 on success, 1 for invalid arguments or configuration and
2 when a file cannot be read or written.
"""

from __future__ import annotations

import argparse
import sys

from ..objective import TransmissionMode
from ..radio import DomainError
from ..sfla import ConfigError, JumpRule
from .experiments import run_experiment, save_csv, write_csv
from .spec import COMMANDS, _int_list, default_spec, load_config

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for I/O here
    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _ints(text: str) -> tuple[int, ...]:
    try:
        values = _int_list(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers such as '8,16' or '1-10', got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _modes(text: str) -> tuple[TransmissionMode, ...]:
    try:
        return tuple(TransmissionMode.parse(t) for t in text.split(",") if t.strip())
    except (ValueError, DomainError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _local_iterations(text: str):
    if text.strip().lower() == "auto":
        return None
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'auto', got {text!r}") from None


def _add_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", "--modes", dest="modes", type=_modes,
                   help="comma separated: urgence, multimedia, batterie_faible")
    p.add_argument("--n", type=_ints, help="subcarrier counts, e.g. 8,16,32")
    p.add_argument("--pop", dest="population", type=int, help="population size F")
    p.add_argument("--memeplexes", "--m", dest="memeplexes", type=_ints)
    p.add_argument("--generations", type=_ints)
    p.add_argument("--local-iterations", type=_local_iterations, help="integer or 'auto'")
    p.add_argument("--seed", "--seeds", dest="seeds", type=_ints, help="e.g. 1-10 or 3,5")
    p.add_argument("--jump-rule", choices=[r.value for r in JumpRule])
    p.add_argument("--out", dest="output", help="CSV path; stdout when omitted")
    p.add_argument("--format", choices=["csv"], default="csv")
    p.add_argument("--workers", type=int, default=1, help="worker processes (timing always uses 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="sflaqos", description="Run SFLA power/modulation allocation experiments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, experiment in COMMANDS.items():
        _add_options(sub.add_parser(name, help=f"{experiment.replace('_', ' ')} experiment"))
    run = sub.add_parser("run", help="run the experiment described by a config file")
    run.add_argument("config", help="flat 'key = value' config file")
    _add_options(run)
    return parser


def _overrides(args) -> dict:
    keys = ("modes", "n", "population", "memeplexes", "generations", "seeds", "output")
    out = {k: getattr(args, k) for k in keys if getattr(args, k) is not None}
    if args.jump_rule is not None:
        out["jump_rule"] = JumpRule.parse(args.jump_rule)
    if args.local_iterations is not None:
        out["local_iterations"] = args.local_iterations
    return out


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.workers < 1:
            raise ConfigError("--workers must be >= 1")
        if args.command == "run":
            spec = load_config(args.config)
            spec = spec.replace(**_overrides(args))
        else:
            spec = default_spec(COMMANDS[args.command], **_overrides(args))
        workers = 1 if spec.experiment == "timing" else args.workers
        rows = run_experiment(spec, workers=workers)
        if spec.output:
            save_csv(rows, spec.output)
        else:
            write_csv(rows, sys.stdout)
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except (ConfigError, DomainError) as exc:
        print(f"sflaqos: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"sflaqos: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
