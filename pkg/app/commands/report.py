"""Spectral subcommands: ``bounds``, ``exact`` and ``curve``."""
import argparse
import logging

from app import bounds, discrepancy
from app.commands import (
    EXIT_OK,
    UsageError,
    add_format,
    add_theta,
    emit,
    now,
    resolve_theta,
    resolve_threads,
)
from app.config import settings
from app.models import CurveRow
from app.output import csv_text, dump_json, model_csv

logger = logging.getLogger(__name__)

CURVE_HEADER = ("k", "lower_plancherel", "exact", "upper_series", "upper_closed")


def _check_k(k: int, flag: str = "--k") -> None:
    if k < 2:
        raise UsageError(f"{flag} must be >= 2, got {k}")


def _exact_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--grid-gamma", type=int, default=None, help="Polar-angle grid size.")
    parser.add_argument("--grid-r", type=int, default=None, help="Radius grid size.")
    parser.add_argument("--no-refine", dest="refine", action="store_false", default=None,
                        help="Skip golden-section refinement.")
    parser.add_argument("--epsilon", type=float, default=None, help="Series truncation target.")
    parser.add_argument("--strict", action="store_true",
                        help="Require a certified truncation; fail with exit 3 otherwise.")


def _grid(args: argparse.Namespace) -> tuple[int, int] | None:
    if args.grid_gamma is None and args.grid_r is None:
        return None
    grid = (args.grid_gamma or settings.grid_gamma, args.grid_r or settings.grid_r)
    if min(grid) < 2:
        raise UsageError("grid sizes must be >= 2")
    return grid


def _exact(args: argparse.Namespace, theta: float, k: int):
    return discrepancy.exact_discrepancy(
        theta, k,
        grid=_grid(args),
        refine=args.refine,
        epsilon=args.epsilon,
        strict=args.strict,
        threads=resolve_threads(args),
    )


# ---------------------------------------------------------------------------
# Handlers
# ---------------------------------------------------------------------------


def cmd_bounds(args: argparse.Namespace) -> int:
    started = now()
    theta = resolve_theta(args)
    _check_k(args.k)
    report = bounds.bound_report(theta, args.k)
    emit(args, dump_json(report) if args.format == "json" else model_csv(report), started)
    return EXIT_OK


def cmd_exact(args: argparse.Namespace) -> int:
    started = now()
    theta = resolve_theta(args)
    _check_k(args.k)
    result = _exact(args, theta, args.k)
    emit(args, dump_json(result) if args.format == "json" else model_csv(result), started)
    return EXIT_OK


def curve_rows(args: argparse.Namespace, theta: float) -> list[CurveRow]:
    rows = []
    for k in range(args.k_min, args.k_max + 1):
        exact = _exact(args, theta, k)
        report = bounds.bound_report(theta, k)
        rows.append(CurveRow(
            k=k,
            lower_plancherel=report.lower_plancherel,
            exact=exact.value,
            upper_series=report.upper_series,
            upper_closed=report.upper_closed,
            uncertainty=exact.uncertainty,
            lower_dominant=report.lower_dominant,
        ))
        logger.info("curve k=%d exact=%.6g", k, exact.value)
    return rows


def cmd_curve(args: argparse.Namespace) -> int:
    started = now()
    theta = resolve_theta(args)
    _check_k(args.k_min, "--k-min")
    if args.k_max < args.k_min:
        raise UsageError(f"--k-max ({args.k_max}) must be >= --k-min ({args.k_min})")
    rows = curve_rows(args, theta)
    if args.format == "json":
        text = dump_json(rows)
    else:
        text = csv_text(CURVE_HEADER, ([getattr(row, col) for col in CURVE_HEADER] for row in rows))
    emit(args, text, started)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parsers
# ---------------------------------------------------------------------------


def add_parsers(sub: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    p = sub.add_parser("bounds", parents=[parent], help="All analytic bounds for one (theta, k).")
    add_theta(p)
    p.add_argument("--k", type=int, required=True)
    add_format(p, "json")
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("exact", parents=[parent], help="Exact spectral discrepancy D(k).")
    add_theta(p)
    p.add_argument("--k", type=int, required=True)
    _exact_options(p)
    add_format(p, "json")
    p.set_defaults(handler=cmd_exact)

    p = sub.add_parser("curve", parents=[parent], help="D(k) and its bounds over a range of k.")
    add_theta(p)
    p.add_argument("--k-min", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    _exact_options(p)
    add_format(p, "csv")
    p.set_defaults(handler=cmd_curve)
