"""Deterministic parallel helpers for Monte Carlo batches.

Work is split into fixed-size chunks whose seeds depend only on
(seed, chunk index), so results do not depend on the thread count.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from utils.logger import get_logger
from utils.resources import default_threads

logger = get_logger("parallel")

T = TypeVar("T")


def derive_seed(seed: int, index: int) -> int:
    """Child seed for item ``index`` of a run seeded with ``seed``."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def chunk_ranges(total: int, chunk_size: int) -> List[Tuple[int, int]]:
    """Split ``range(total)`` into consecutive (start, stop) chunks."""
    chunk_size = max(1, int(chunk_size))
    return [(start, min(start + chunk_size, total)) for start in range(0, total, chunk_size)]


def map_chunks(
    func: Callable[[int, int], T],
    total: int,
    chunk_size: int,
    threads: Optional[int] = None,
) -> List[T]:
    """
    Run ``func(start, stop)`` over chunks of ``range(total)``.

    Args:
        func: Chunk worker; must not share mutable state across calls
        total: Number of items
        chunk_size: Items per chunk
        threads: Worker threads (None = available CPUs, 1 = inline)

    Returns:
        Chunk results in chunk order
    """
    ranges = chunk_ranges(total, chunk_size)
    workers = threads if threads is not None else default_threads()
    workers = max(1, min(int(workers), len(ranges) or 1))

    if workers == 1 or len(ranges) <= 1:
        return [func(start, stop) for start, stop in ranges]

    logger.debug(f"Running {len(ranges)} chunks on {workers} threads")
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map preserves submission order, so the reduction stays deterministic
        return list(pool.map(lambda r: func(*r), ranges))


def map_items(func: Callable[[T], object], items: Sequence[T], threads: Optional[int] = None) -> List[object]:
    """Ordered parallel map over a short list of independent items."""
    workers = threads if threads is not None else default_threads()
    workers = max(1, min(int(workers), len(items) or 1))
    if workers == 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
