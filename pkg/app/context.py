"""Shared template context and rendering for human-readable reports."""
from pathlib import Path

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from app import __version__
from app.config import settings
from app.models import CheckResult

TEMPLATE_DIR = Path(__file__).resolve().parent.parent / "templates"

_env = Environment(
    loader=FileSystemLoader(str(TEMPLATE_DIR)),
    undefined=StrictUndefined,
    keep_trailing_newline=True,
    trim_blocks=True,
    lstrip_blocks=True,
)


def base_context() -> dict:
    """Common template context: version and the effective numeric settings."""
    return {
        "version": __version__,
        "epsilon": settings.epsilon,
        "grid": (settings.grid_gamma, settings.grid_r),
        "threads": settings.threads,
    }


def render_verify_report(
    profile: str, results: list[CheckResult], seconds: float, threads: int | None = None
) -> str:
    """Text report; ``threads`` is the count the run actually used, when known."""
    ctx = base_context()
    if threads is not None:
        ctx["threads"] = threads
    ctx.update({
        "profile": profile,
        "results": results,
        "passed": sum(1 for r in results if r.passed),
        "failed": [r.name for r in results if not r.passed],
        "seconds": seconds,
    })
    return _env.get_template("verify_report.txt").render(ctx)
