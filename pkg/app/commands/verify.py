"""``verify`` subcommand: run the acceptance suite and report."""
import argparse
import logging

from app import checks
from app.commands import EXIT_OK, EXIT_VERIFY_FAILED, emit, now, resolve_threads
from app.context import render_verify_report
from app.output import dump_json

logger = logging.getLogger(__name__)


def cmd_verify(args: argparse.Namespace) -> int:
    started = now()
    threads = resolve_threads(args)
    results = checks.run_profile(args.profile, threads=threads)
    if args.format == "json":
        text = dump_json(results)
    else:
        text = render_verify_report(args.profile, results, now() - started, threads=threads)
    emit(args, text, started)
    failed = [r.name for r in results if not r.passed]
    if failed:
        logger.error("verify failed: %s", ", ".join(failed))
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def add_parsers(sub: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    p = sub.add_parser("verify", parents=[parent], help="Run the self-verification suite.")
    p.add_argument("--profile", choices=sorted(checks.PROFILES), default="quick")
    p.add_argument("--json", dest="format", action="store_const", const="json", default="text",
                   help="Emit check results as JSON instead of the text report.")
    p.set_defaults(handler=cmd_verify)
