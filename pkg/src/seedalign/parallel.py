"""Fixed-block row parallelism.

Work is cut into blocks whose boundaries depend only on the problem size, and
BLAS is pinned to one thread inside them, so results are bit-identical for
any worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from typing import Callable, TypeVar

from threadpoolctl import threadpool_limits

T = TypeVar("T")


def default_threads() -> int:
    return os.cpu_count() or 1


def blocks(n: int, size: int) -> list[tuple[int, int]]:
    return [(i, min(i + size, n)) for i in range(0, n, size)]


@contextmanager
def single_threaded_blas():
    with threadpool_limits(limits=1):
        yield


def map_blocks(fn: Callable[[int, int], T], n: int, size: int, threads: int = 1) -> list[T]:
    """Apply ``fn(start, stop)`` to every block of ``range(n)``, results in block order."""
    spans = blocks(n, size)
    with single_threaded_blas():
        if threads <= 1 or len(spans) <= 1:
            return [fn(a, b) for a, b in spans]
        with ThreadPoolExecutor(max_workers=threads) as ex:
            return list(ex.map(lambda ab: fn(*ab), spans))
