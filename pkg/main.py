"""spheremix command-line entry point."""
import argparse
import logging
import sys

from app import __version__
from app.commands import EXIT_IO, EXIT_NUMERIC, EXIT_USAGE, common_parser
from app.commands import report, simulate, verify
from app.config import settings
from app.spectral import TruncationError

logger = logging.getLogger("spheremix")

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spheremix",
        description="Discrepancy of the drunkard's walk on the sphere: exact values, bounds and simulation.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    parent = common_parser()
    report.add_parsers(sub, parent)
    simulate.add_parsers(sub, parent)
    verify.add_parsers(sub, parent)
    return parser


def _configure_logging(verbose: int) -> None:
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, settings.log_level)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    _configure_logging(args.verbose)

    try:
        return args.handler(args)
    except TruncationError as exc:
        logger.error("truncation failure: %s", exc)
        return EXIT_NUMERIC
    except ValueError as exc:
        logger.error("invalid arguments: %s", exc)
        return EXIT_USAGE
    except OSError as exc:
        logger.error("cannot write output: %s", exc)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
