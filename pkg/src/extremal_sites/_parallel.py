"""Worker-count resolution and an order-preserving parallel map."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, TypeVar

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "EXTREMAL_SITES_THREADS"


def resolve_threads(threads: Optional[int] = None) -> int:
    """The environment variable wins over ``threads``; default is the core count."""
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            value = int(env)
        except ValueError:
            raise ValueError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    elif threads is not None:
        value = threads
    else:
        value = os.cpu_count() or 1
    return max(1, value)


def pmap(fn: Callable[[T], R], items: Iterable[T], threads: Optional[int] = None) -> List[R]:
    """Map ``fn`` over ``items``, returning results in input order.

    Results never depend on the worker count as long as ``fn`` is pure.
    """
    items = list(items)
    n = resolve_threads(threads)
    if n == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
