"""Deterministic fan-out of independent work items over a thread pool.

Work is always split into the same items regardless of the thread count,
and results come back in item order, so output never depends on how many
threads ran it.
"""
import asyncio
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, TypeVar

from app.config import settings

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


async def gather_items(fn: Callable[[T], R], items: Iterable[T], threads: int) -> list[R]:
    """Run ``fn`` over ``items`` in a pool of ``threads`` workers, preserving order."""
    loop = asyncio.get_running_loop()
    with ThreadPoolExecutor(max_workers=threads, thread_name_prefix="spheremix") as pool:
        futures = [loop.run_in_executor(pool, fn, item) for item in items]
        return list(await asyncio.gather(*futures))


def map_items(fn: Callable[[T], R], items: Iterable[T], threads: int | None = None) -> list[R]:
    """Synchronous entry point; runs inline when one thread is requested."""
    items = list(items)
    workers = settings.threads if threads is None else threads
    if workers < 1:
        raise ValueError(f"threads must be >= 1, got {workers}")
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    logger.debug("fanning out %d items over %d threads", len(items), workers)
    return asyncio.run(gather_items(fn, items, min(workers, len(items))))
