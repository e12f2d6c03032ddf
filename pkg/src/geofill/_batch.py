"""Chunked execution of per-point work, serial or across a thread pool.

Chunk boundaries depend only on the number of items, and every chunk writes
to a disjoint slice of preallocated output arrays, so results are identical
for any worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

__all__ = ["chunk_bounds", "run_chunked"]

_CHUNK_SIZE = 512

_T = TypeVar("_T")


def chunk_bounds(n_items: int, chunk_size: int = _CHUNK_SIZE) -> list[tuple[int, int]]:
    """Half-open [start, stop) ranges covering 0..n_items in fixed-size chunks."""
    if n_items < 0:
        raise ValueError(f"n_items must be non-negative, got {n_items}")
    return [(start, min(start + chunk_size, n_items)) for start in range(0, n_items, chunk_size)]


def run_chunked(
    work: Callable[[int, int], _T],
    n_items: int,
    workers: int,
) -> list[_T]:
    """Apply ``work(start, stop)`` to every chunk and return results in chunk order.

    ``work`` must only touch state owned by its own index range.  With
    ``workers == 1`` everything runs on the calling thread.
    """
    bounds = chunk_bounds(n_items)
    if workers <= 1 or len(bounds) <= 1:
        return [work(start, stop) for start, stop in bounds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(work, start, stop) for start, stop in bounds]
        return [f.result() for f in futures]
