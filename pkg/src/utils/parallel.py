"""Order-preserving parallel map used by the enumeration kernels."""

import contextvars
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, TypeVar

from src.utils.settings import current_settings

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> List[R]:
    """Apply ``fn`` to every item and return results in input order.

    Runs inline unless more than one thread is configured. Worker threads
    inherit the caller's context so settings overrides stay in effect.
    """
    items = list(items)
    threads = current_settings().threads
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        futures = [
            pool.submit(contextvars.copy_context().run, fn, item) for item in items
        ]
        return [future.result() for future in futures]
