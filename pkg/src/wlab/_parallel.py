"""Deterministic parallel reduction over a partitioned search space.

The env var WLAB_THREADS caps the worker count (0 or unset = one worker
per CPU).  All reductions here are exact integer sums, so the result is
independent of chunking and worker count by construction.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")

# Below this many items the process-pool overhead dominates; stay serial.
_MIN_PARALLEL_ITEMS = 256


def worker_count() -> int:
    raw = os.environ.get("WLAB_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValueError("WLAB_THREADS must be an integer, got %r" % raw) from None
    if n < 0:
        raise ValueError("WLAB_THREADS must be nonnegative")
    if n == 0:
        return os.cpu_count() or 1
    return n


def _chunks(items: Sequence[T], n: int) -> list[Sequence[T]]:
    size = (len(items) + n - 1) // n
    return [items[i : i + size] for i in range(0, len(items), size)]


def sum_over(fn: Callable[[Sequence[T]], int], items: Sequence[T]) -> int:
    """Sum fn(chunk) over a partition of items, in parallel when worthwhile.

    fn must be a picklable top-level callable mapping a chunk to an int.
    """
    workers = worker_count()
    if workers <= 1 or len(items) < _MIN_PARALLEL_ITEMS:
        return fn(items)
    chunks = _chunks(items, workers)
    try:
        with ProcessPoolExecutor(max_workers=min(workers, len(chunks))) as pool:
            return sum(pool.map(fn, chunks))
    except (OSError, PermissionError):
        # Restricted environments without fork/spawn fall back to serial;
        # the sum is identical either way.
        return fn(items)
