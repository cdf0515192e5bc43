"""Box-counting dimension of trace points near the real line or a domain boundary."""

from typing import Optional, Sequence

import numpy as np

from boundary_stats.box_counting import box_counts, check_scales, fit_box_dimension, line_box_counts
from boundary_stats.sampling import trace_rounds
from conformal.geometry import densify
from conformal.maps import ConformalMap
from errors import ParameterError
from loewner.traces import map_trace
from models.boundary import DimensionReport
from models.conformal import SourceDomain
from models.loewner import Trace, TraceKind
from utils.logger import get_logger

logger = get_logger("trace_boundary")

LINE_HORIZON = 1.0
LINE_WINDOW = 2.0


def _check_kappa(kappa: float) -> None:
    if not 0 < kappa <= 8.0:
        raise ParameterError(f"kappa must lie in (0, 8], got {kappa}", kappa=kappa)


def _degenerate(
    kappa: float, n_traces: int, expected: Optional[float], note: str, seed: int, n_steps
) -> DimensionReport:
    logger.warning(f"Degenerate dimension experiment at kappa={kappa}: {note}")
    return DimensionReport(
        kappa=float(kappa),
        n_traces=n_traces,
        box=None,
        expected=expected,
        degenerate=True,
        note=note,
        seed=int(seed),
        n_steps=int(n_steps or 0),
    )


def boundary_line_dimension(
    kappa: float,
    n_traces: int,
    scales: Optional[Sequence[float]] = None,
    seed: int = 0,
    horizon: float = LINE_HORIZON,
    n_steps: Optional[int] = None,
    window: float = LINE_WINDOW,
    threads: Optional[int] = None,
    deadline: Optional[float] = None,
) -> DimensionReport:
    """
    Box-counting slope of chordal traces intersected with the thickened real line.

    Boxes of side eta on [-window, window] are counted where the densified
    trace has Im < eta; counts are averaged over traces before the fit.
    For kappa <= 4 the trace does not return to the line and the report is
    degenerate.
    """
    _check_kappa(kappa)
    s = check_scales(scales)
    expected = 2.0 - 8.0 / kappa if kappa > 4 else None
    if kappa <= 4:
        return _degenerate(kappa, 0, expected, "kappa <= 4: trace does not revisit the line", seed, n_steps)

    spacing = float(s.min()) / 4.0
    total = np.zeros(len(s))
    done = 0
    n_steps_used = None
    for batch in trace_rounds(kappa, n_traces, seed, TraceKind.CHORDAL, horizon, n_steps, threads, deadline):
        n_steps_used = batch.n_steps
        for row in batch.points:
            total += line_box_counts(densify(row, spacing), s, window)
        done += batch.n_traces
    if done == 0 or np.count_nonzero(total) < 2:
        return _degenerate(kappa, done, expected, "too few boundary visits for a fit", seed, n_steps_used)

    box = fit_box_dimension(s, total / done)
    logger.info(f"Line dimension kappa={kappa}: slope {box.slope:.4f} (expected {expected:.4f}) over {done} traces")
    return DimensionReport(
        kappa=float(kappa),
        n_traces=done,
        box=box,
        expected=expected,
        seed=int(seed),
        n_steps=int(n_steps_used),
        truncated=done < n_traces,
    )


def trace_boundary_dimension(
    fmap: ConformalMap,
    kappa: float,
    n_traces: int,
    scales: Optional[Sequence[float]] = None,
    seed: int = 0,
    horizon: float = LINE_HORIZON,
    n_steps: Optional[int] = None,
    threads: Optional[int] = None,
    deadline: Optional[float] = None,
) -> DimensionReport:
    """
    Box-counting slope of f(gamma) near the boundary of G = f(disk).

    gamma is chordal SLE in the disk from 1 to -1. Image points within eta
    of the boundary are counted in boxes of side eta, averaged over traces.
    """
    if fmap.source != SourceDomain.DISK:
        raise ParameterError("trace_boundary_dimension needs a map defined on the disk")
    _check_kappa(kappa)
    s = check_scales(scales)
    expected = 2.0 - 8.0 / kappa if kappa > 4 else None
    if kappa <= 4:
        return _degenerate(kappa, 0, expected, "kappa <= 4: trace does not revisit the boundary", seed, n_steps)

    spacing = float(s.min()) / 4.0
    total = np.zeros(len(s))
    done = 0
    n_steps_used = None
    for batch in trace_rounds(kappa, n_traces, seed, TraceKind.CHORDAL, horizon, n_steps, threads, deadline):
        n_steps_used = batch.n_steps
        for row in batch.points:
            disk = densify((1j - row) / (1j + row), spacing)
            source = Trace(times=np.arange(disk.size, dtype=float), points=disk, kind=TraceKind.DISK_CHORDAL)
            image = map_trace(source, fmap, h=spacing / 4.0).points
            dist = fmap.boundary_distance(image)
            for i, eta in enumerate(s):
                near = image[dist < eta]
                if near.size:
                    total[i] += box_counts(near, [eta])[0]
        done += batch.n_traces
    if done == 0 or np.count_nonzero(total) < 2:
        return _degenerate(kappa, done, expected, "too few boundary visits for a fit", seed, n_steps_used)

    box = fit_box_dimension(s, total / done)
    logger.info(f"Trace-boundary dimension ({fmap.kind.value}) kappa={kappa}: slope {box.slope:.4f}")
    return DimensionReport(
        kappa=float(kappa),
        n_traces=done,
        box=box,
        expected=expected,
        seed=int(seed),
        n_steps=int(n_steps_used),
        truncated=done < n_traces,
    )
