"""
Block-parallel map with a fixed reduction order.

Work items are split into contiguous index blocks. Results come back in block order
whatever the worker count, so anything reduced from them is bit-identical for
--threads 1 and --threads N.
"""

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")

DEFAULT_BLOCK = 2048


def blocks(n: int, size: int = DEFAULT_BLOCK) -> list[tuple[int, int]]:
    return [(lo, min(lo + size, n)) for lo in range(0, n, size)]


def map_blocks(fn: Callable[..., T], items: Sequence[tuple], threads: int = 1) -> list[T]:
    """Apply `fn(*item)` to every item; `fn` must be a picklable top-level function."""
    if threads <= 1 or len(items) <= 1:
        return [fn(*item) for item in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(fn, *item) for item in items]
        return [f.result() for f in futures]
