"""CLI subcommands and the argument helpers they share."""
import argparse
import math
import sys
import time
from pathlib import Path
from typing import Any

from app.output import write_artifact

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


class UsageError(ValueError):
    """Invalid combination of command-line arguments."""


def common_parser() -> argparse.ArgumentParser:
    """Flags accepted by every subcommand."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--threads", type=int, default=None,
                        help="Worker threads (default: SPHEREMIX_THREADS or 1). Output does not depend on it.")
    parent.add_argument("--out", type=Path, default=None,
                        help="Write output to this file plus a .manifest.json sidecar instead of stdout.")
    parent.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logs.")
    return parent


def add_theta(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--theta", type=float, required=True, help="Step size (radians unless --degrees).")
    parser.add_argument("--degrees", action="store_true", help="Interpret --theta in degrees.")


def add_format(parser: argparse.ArgumentParser, default: str) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--json", dest="format", action="store_const", const="json")
    group.add_argument("--csv", dest="format", action="store_const", const="csv")
    parser.set_defaults(format=default)


def resolve_theta(args: argparse.Namespace) -> float:
    theta = math.radians(args.theta) if args.degrees else args.theta
    if not 0.0 < theta < math.pi:
        raise UsageError(f"theta must lie strictly between 0 and pi radians, got {theta!r}")
    return theta


def resolve_threads(args: argparse.Namespace) -> int | None:
    if args.threads is not None and args.threads < 1:
        raise UsageError(f"--threads must be >= 1, got {args.threads}")
    return args.threads


def parameters(args: argparse.Namespace) -> dict[str, Any]:
    """Flag values recorded in a run manifest."""
    skip = {"handler", "out", "verbose"}
    return {
        key: str(value) if isinstance(value, Path) else value
        for key, value in sorted(vars(args).items())
        if key not in skip
    }


def emit(args: argparse.Namespace, text: str, started: float, seed: int | None = None) -> None:
    """Send command output to ``--out`` (with manifest) or to stdout."""
    if args.out is None:
        sys.stdout.write(text)
        return
    write_artifact(args.out, text, command=args.command, parameters=parameters(args),
                   started=started, seed=seed)


def now() -> float:
    return time.monotonic()
