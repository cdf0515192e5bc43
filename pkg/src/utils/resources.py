"""Memory and CPU budget checks."""

import os
from typing import Optional

import psutil

from errors import ResourceError
from utils.logger import get_logger

logger = get_logger("resources")

# Fraction of available memory a single allocation may use
MEMORY_FRACTION = 0.5


def default_threads() -> int:
    """Available parallelism (SLE_LAB_THREADS overrides)."""
    env = os.getenv("SLE_LAB_THREADS")
    if env:
        try:
            value = int(env)
            if value > 0:
                return value
        except ValueError:
            logger.warning(f"Ignoring SLE_LAB_THREADS={env!r}")
    return psutil.cpu_count(logical=True) or 1


def available_memory() -> int:
    """Available system memory in bytes."""
    return int(psutil.virtual_memory().available)


def check_allocation(n_bytes: int, what: str, limit: Optional[int] = None) -> None:
    """
    Raise ResourceError if an allocation would exceed the memory budget.

    Args:
        n_bytes: Planned allocation size
        what: Description used in the error message
        limit: Explicit byte limit; defaults to a fraction of available memory
    """
    budget = limit if limit is not None else int(available_memory() * MEMORY_FRACTION)
    if n_bytes > budget:
        raise ResourceError(
            f"{what} needs {n_bytes / 2**20:.1f} MiB, budget is {budget / 2**20:.1f} MiB",
            requested=n_bytes,
            budget=budget,
        )
    logger.debug(f"{what}: {n_bytes / 2**20:.2f} MiB within budget")
