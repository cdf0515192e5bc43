"""Chunked trace streams shared by the Monte Carlo experiments."""

import time
from typing import Iterator, Optional

import numpy as np

from loewner.traces import trace_batch
from models.loewner import TraceBatch, TraceKind
from utils.logger import get_logger
from utils.resources import default_threads
from utils.settings import section

logger = get_logger("sampling")


def step_grid(horizon: float, n_steps: int) -> np.ndarray:
    """Evaluation times at every step of the driving function."""
    return np.linspace(0.0, horizon, int(n_steps) + 1)


def deadline_from(seconds: Optional[float]) -> Optional[float]:
    """Monotonic deadline ``seconds`` from now (None = no limit)."""
    return None if seconds is None else time.monotonic() + float(seconds)


def expired(deadline: Optional[float]) -> bool:
    return deadline is not None and time.monotonic() >= deadline


def trace_rounds(
    kappa: float,
    n_traces: int,
    seed: int,
    kind: TraceKind = TraceKind.CHORDAL,
    horizon: float = 1.0,
    n_steps: Optional[int] = None,
    threads: Optional[int] = None,
    deadline: Optional[float] = None,
) -> Iterator[TraceBatch]:
    """
    Yield batches of traces on the full step grid until ``n_traces`` are done.

    Trace ``i`` always has seed derive_seed(seed, i). The stream stops early
    once ``deadline`` has passed; callers compare the traces they received
    with ``n_traces`` to detect truncation.
    """
    cfg = section("boundary")
    n_steps = int(cfg.get("n_steps", 1000) if n_steps is None else n_steps)
    chunk = int(cfg.get("chunk_size", 64))
    workers = threads if threads else default_threads()
    round_size = chunk * max(1, int(workers))
    times = step_grid(horizon, n_steps)

    done = 0
    while done < n_traces:
        if expired(deadline):
            logger.warning(f"Time budget exhausted after {done} of {n_traces} traces")
            return
        size = min(round_size, n_traces - done)
        yield trace_batch(
            kappa,
            horizon,
            n_steps,
            seed,
            size,
            eval_times=times,
            kind=kind,
            threads=threads,
            chunk_size=chunk,
            offset=done,
        )
        done += size
