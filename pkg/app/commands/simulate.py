"""``simulate`` subcommand: Monte Carlo end points as CSV."""
import argparse
import logging

from app import walks
from app.commands import EXIT_OK, UsageError, add_theta, emit, now, resolve_theta, resolve_threads
from app.models import MAX_SEED, Formulation, WalkConfig

logger = logging.getLogger(__name__)


def cmd_simulate(args: argparse.Namespace) -> int:
    started = now()
    theta = resolve_theta(args)
    if args.k < 0:
        raise UsageError(f"--k must be >= 0, got {args.k}")
    if not 0 <= args.seed <= MAX_SEED:
        raise UsageError(f"--seed must be an unsigned 64-bit integer, got {args.seed}")
    config = WalkConfig(
        theta=theta,
        k=args.k,
        formulation=Formulation(args.formulation),
        seed=args.seed,
        m=args.samples,
    )
    samples = walks.run_walk(config, threads=resolve_threads(args))
    emit(args, samples.to_csv(include_points=not args.no_points), started, seed=config.seed)
    return EXIT_OK


def add_parsers(sub: argparse._SubParsersAction, parent: argparse.ArgumentParser) -> None:
    p = sub.add_parser("simulate", parents=[parent], help="Simulate k-step walks from the north pole.")
    add_theta(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--formulation", choices=[f.value for f in Formulation], default=Formulation.DRUNKARD.value)
    p.add_argument("--samples", type=int, default=10_000, help="Number of trajectories m.")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-points", action="store_true", help="Write only trajectory,cos_polar.")
    p.add_argument("--csv", dest="format", action="store_const", const="csv", default="csv",
                   help="CSV output (the only format for samples).")
    p.set_defaults(handler=cmd_simulate)
