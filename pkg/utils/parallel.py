"""
Order-preserving process pool map.

Work functions must be module-level (picklable). Results always come back
in input order, so callers stay deterministic whatever the worker count.
"""

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

from config.settings import get_settings

from .logger import get_logger

T = TypeVar("T")
R = TypeVar("R")

logger = get_logger()


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> List[R]:
    """
    Apply fn to every item, in a process pool when it is worth it.

    Args:
        fn: Module-level function of one argument
        items: Work items
        threads: Worker cap; defaults to STAIRCASE_THREADS

    Returns:
        List[R]: fn(item) for each item, in input order
    """
    items = list(items)
    settings = get_settings()
    workers = threads if threads is not None else settings.threads
    if workers <= 1 or len(items) < settings.parallel_min_items:
        return [fn(item) for item in items]

    workers = min(workers, len(items))
    chunksize = max(1, len(items) // (workers * 4))
    logger.debug(f"parallel_map: {len(items)} items on {workers} workers (chunksize {chunksize})")
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))
