"""Independent traces on both sides of the real line and where their boundary sets meet."""

from typing import Optional, Sequence, Tuple

import numpy as np

from boundary_stats.sampling import trace_rounds
from conformal.geometry import densify
from errors import ParameterError
from models.boundary import TwoSidedReport
from models.loewner import TraceKind
from utils.logger import get_logger
from utils.parallel import derive_seed

logger = get_logger("two_sided")

DEFAULT_ETAS = [2.0**-j for j in range(3, 8)]
TWO_SIDED_HORIZON = 1.0
# |Re x| range compared; the traces share their starting point 0
DEFAULT_WINDOW = (0.25, 1.0)


def _line_set(points: np.ndarray, eta: float, window: Tuple[float, float]) -> np.ndarray:
    x = points[np.abs(points.imag) < eta].real
    return np.sort(x[(np.abs(x) >= window[0]) & (np.abs(x) <= window[1])])


def _sets_meet(a: np.ndarray, b: np.ndarray, eta: float) -> bool:
    """Whether some point of ``a`` lies within eta of some point of ``b`` (both sorted)."""
    if a.size == 0 or b.size == 0:
        return False
    idx = np.clip(np.searchsorted(b, a), 1, b.size - 1) if b.size > 1 else np.zeros(a.size, dtype=np.int64)
    gap = np.minimum(np.abs(a - b[idx]), np.abs(a - b[np.maximum(idx - 1, 0)]))
    return bool(np.min(gap) <= eta)


def two_sided_intersection(
    kappa: float,
    n_traces: int,
    seed: int = 0,
    etas: Optional[Sequence[float]] = None,
    window: Sequence[float] = DEFAULT_WINDOW,
    horizon: float = TWO_SIDED_HORIZON,
    n_steps: Optional[int] = None,
    threads: Optional[int] = None,
    deadline: Optional[float] = None,
) -> TwoSidedReport:
    """
    Frequency with which chordal SLE in the upper half plane and an independent
    one in the lower half plane come within eta of each other on the real line.

    Only points with |Re| in ``window`` are compared.
    """
    if not 0 < kappa <= 8:
        raise ParameterError(f"kappa must lie in (0, 8], got {kappa}", kappa=kappa)
    etas = sorted((float(e) for e in (DEFAULT_ETAS if etas is None else etas)), reverse=True)
    if not etas or any(not e > 0 for e in etas):
        raise ParameterError("etas must be positive")
    lo, hi = float(window[0]), float(window[1])
    if not 0 <= lo < hi:
        raise ParameterError(f"window must satisfy 0 <= lo < hi, got {window}")

    spacing = min(etas) / 4.0
    upper_seed, lower_seed = derive_seed(seed, 0), derive_seed(seed, 1)
    meets = np.zeros(len(etas))
    done = 0
    upper = trace_rounds(kappa, n_traces, upper_seed, TraceKind.CHORDAL, horizon, n_steps, threads, deadline)
    lower = trace_rounds(kappa, n_traces, lower_seed, TraceKind.CHORDAL, horizon, n_steps, threads, deadline)
    for top, bottom in zip(upper, lower):
        for a_row, b_row in zip(top.points, bottom.points):
            a = densify(a_row, spacing)
            b = np.conj(densify(b_row, spacing))
            for i, eta in enumerate(etas):
                if _sets_meet(_line_set(a, eta, (lo, hi)), _line_set(b, eta, (lo, hi)), eta):
                    meets[i] += 1
        done += min(top.n_traces, bottom.n_traces)

    freqs = (meets / done).tolist() if done else [0.0] * len(etas)
    logger.info(f"Two-sided kappa={kappa}: {done} pairs, frequencies {freqs}")
    return TwoSidedReport(
        kappa=float(kappa),
        n_pairs=done,
        etas=etas,
        frequencies=freqs,
        window=[lo, hi],
        truncated=done < n_traces,
    )
