"""Command line entry point: weyllab <command> [--config f] [--set key=value ...]."""
from __future__ import annotations

import argparse
import json
import sys

from .errors import CapacityError, DomainError, UsageError, WeylLabError
from .lab.commands import REGISTRY
from .lab.config import load_config, parse_config, parse_override
from .lab.runner import run_experiment

EXIT_OK, EXIT_USAGE, EXIT_CAPACITY, EXIT_FLAGGED = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="weyllab", description="Quadratic Weyl sum laboratory")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML experiment config")
    common.add_argument("--out", help="output directory (default: runs)")
    common.add_argument("--force", action="store_true", help="rerun records already in the store")
    common.add_argument("--threads", type=int, help="FFT worker threads")
    common.add_argument("--seed", type=int, help="seed for quasi-random sampling")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a parameter (TOML value syntax)")
    common.add_argument("--no-figures", action="store_true", help="skip PNG rendering")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, cmd in REGISTRY.items():
        sp = sub.add_parser(name, parents=[common], help=cmd.help, description=cmd.help)
        sp.set_defaults(command=name)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = dict(parse_override(s) for s in args.set)
        if args.config:
            cfg = load_config(args.config, args.command, overrides)
        else:
            cfg = parse_config({}, args.command, overrides)
        if args.out:
            cfg.out = args.out
        if args.seed is not None:
            if not 0 <= args.seed < 2**64:
                raise UsageError("--seed: expected an unsigned 64-bit integer")
            cfg.seed = args.seed
        if args.threads is not None:
            if args.threads < 1:
                raise UsageError("--threads: expected a positive integer")
            cfg.threads = args.threads
        outcome = run_experiment(cfg, force=args.force, figures=not args.no_figures)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"capacity guard: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except DomainError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WeylLabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    for rec in outcome.records:
        print(json.dumps({"command": rec.command, **{k: v for k, v in rec.results.items()
                                                      if not isinstance(v, list)}},
                         default=str))
    if outcome.skipped:
        print(f"{outcome.skipped} record(s) already in the store", file=sys.stderr)
    return EXIT_FLAGGED if outcome.flagged else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
