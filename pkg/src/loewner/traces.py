"""Loewner traces by backward composition of slit maps.

The driving function is piecewise constant on the uniform grid: step ``j``
grows a slit of capacity ``dt`` at ``values[j]``. A trace point at time
t = m*dt + tau (0 < tau <= dt) is the exact tip of the partial slit at step
``m`` pulled back through the inverse maps of steps m-1, ..., 0.
"""

import csv
import math
from pathlib import Path
from typing import TYPE_CHECKING, Callable, Optional, Sequence, Union

import numpy as np

from const import DEFAULT_EVAL_POINTS, GEOMETRIC_GRID_START, TIP_HEIGHT_FACTOR
from errors import DomainError, EvaluationError, ParameterError
from loewner.driving import TWO_PI, brownian_path, sample_driving, validate_driving_params
from loewner.slit_maps import chordal_slit_inverse, chordal_tip, radial_slit_inverse, radial_tip
from models.conformal import SourceDomain
from models.loewner import DrivingFunction, Trace, TraceBatch, TraceKind
from utils.formatters import format_float
from utils.logger import get_logger
from utils.parallel import derive_seed, map_chunks

if TYPE_CHECKING:
    from conformal.maps import ConformalMap

logger = get_logger("loewner")

# Relative slack when locating the step an evaluation time falls into
_STEP_SLACK = 1e-9
# Points this far outside the closed source domain are rejected
_OUTSIDE_TOL = 1e-9


# Trace points are exact slit tips; h is never added to them, it only widens hitting
# targets and sets the pullback height in map_trace.
def tip_height(dt: float) -> float:
    """Regularisation height h = sqrt(dt) / 10."""
    return TIP_HEIGHT_FACTOR * math.sqrt(dt)


def default_eval_times(horizon: float, n_points: int = DEFAULT_EVAL_POINTS) -> np.ndarray:
    """Time 0 followed by a geometric grid resolving the start of the trace."""
    if n_points < 2:
        return np.array([0.0])
    return np.concatenate([[0.0], np.geomspace(GEOMETRIC_GRID_START * horizon, horizon, n_points - 1)])


def _locate(eval_times: np.ndarray, dt: float, n_steps: int):
    """Step index m (-1 for t = 0) and residual time tau in (0, dt] per evaluation time."""
    m = np.ceil(eval_times / dt - _STEP_SLACK).astype(np.int64) - 1
    m = np.clip(m, -1, n_steps - 1)
    tau = np.maximum(eval_times - m * dt, 0.0)
    return m, tau


def _check_eval_times(eval_times, horizon: float) -> np.ndarray:
    times = np.asarray(eval_times, dtype=float).ravel()
    if times.size == 0:
        raise ParameterError("eval_times is empty")
    if not np.all(np.isfinite(times)):
        raise ParameterError("eval_times must be finite")
    slack = 1e-12 * horizon
    if times.min() < -slack or times.max() > horizon + slack:
        raise ParameterError(
            f"eval_times must lie in [0, {horizon}], got [{times.min()}, {times.max()}]",
            horizon=horizon,
        )
    return np.clip(times, 0.0, horizon)


def _pull_back(
    z: np.ndarray,
    values: np.ndarray,
    dt: float,
    m: np.ndarray,
    inverse: Callable,
) -> np.ndarray:
    """Apply inverse step maps m-1, ..., 0 to column p of ``z`` (columns sorted by m)."""
    top = int(m.max()) if m.size else -1
    for j in range(top - 1, -1, -1):
        first = int(np.searchsorted(m, j, side="right"))
        block = inverse(z[:, first:], values[:, j : j + 1], dt)
        if not np.all(np.isfinite(block)):
            raise EvaluationError(f"Slit-map composition blew up at step {j} (t = {j * dt:.6g})", step=j)
        z[:, first:] = block
    return z


def _trace_points(values: np.ndarray, dt: float, eval_times: np.ndarray, kind: TraceKind) -> np.ndarray:
    """Trace points for a (B, n+1) block of driving values at sorted ``eval_times``."""
    n_steps = values.shape[1] - 1
    m, tau = _locate(eval_times, dt, n_steps)
    at_start = m < 0
    idx = np.maximum(m, 0)

    if kind == TraceKind.RADIAL:
        z = radial_tip(values[:, idx], tau[None, :])
        z[:, at_start] = np.exp(1j * values[:, :1])
        inverse = radial_slit_inverse
    else:
        z = chordal_tip(values[:, idx], tau[None, :])
        z[:, at_start] = values[:, :1]
        inverse = chordal_slit_inverse

    return _pull_back(np.array(z, dtype=complex), values, dt, m, inverse)


def _sorted_points(values, dt, eval_times, kind) -> np.ndarray:
    order = np.argsort(eval_times, kind="stable")
    points = np.empty((values.shape[0], len(eval_times)), dtype=complex)
    points[:, order] = _trace_points(values, dt, eval_times[order], kind)
    return points


def _single_trace(driving: DrivingFunction, eval_times, kind: TraceKind) -> Trace:
    if eval_times is None:
        eval_times = default_eval_times(driving.horizon)
    times = _check_eval_times(eval_times, driving.horizon)
    points = _sorted_points(driving.values[None, :], driving.dt, times, kind)[0]
    return Trace(times=times, points=points, kind=kind, kappa=driving.kappa, seed=driving.seed, dt=driving.dt)


def chordal_trace(driving: DrivingFunction, eval_times: Optional[Sequence[float]] = None) -> Trace:
    """
    Chordal trace in the upper half plane.

    Args:
        driving: Chordal driving function
        eval_times: Times in [0, horizon]; defaults to a geometric grid

    Returns:
        Trace with gamma(0) = W_0 on the real line
    """
    if driving.kind != TraceKind.CHORDAL:
        raise ParameterError(f"chordal_trace needs a chordal driving function, got {driving.kind.value}")
    return _single_trace(driving, eval_times, TraceKind.CHORDAL)


def radial_trace(driving: DrivingFunction, eval_times: Optional[Sequence[float]] = None) -> Trace:
    """Radial trace in the unit disk from exp(i*W_0) toward 0."""
    if driving.kind != TraceKind.RADIAL:
        raise ParameterError(f"radial_trace needs a radial driving function, got {driving.kind.value}")
    return _single_trace(driving, eval_times, TraceKind.RADIAL)


def chordal_disk_trace(driving: DrivingFunction, eval_times: Optional[Sequence[float]] = None) -> Trace:
    """Chordal trace in the disk from 1 to -1 (half-plane trace under z -> (i - z)/(i + z))."""
    trace = chordal_trace(driving, eval_times)
    z = trace.points
    points = (1j - z) / (1j + z)
    return Trace(
        times=trace.times, points=points, kind=TraceKind.DISK_CHORDAL, kappa=trace.kappa, seed=trace.seed, dt=trace.dt
    )


def trace_batch(
    kappa: float,
    horizon: float,
    n_steps: int,
    seed: int,
    n_traces: int,
    eval_times: Optional[Sequence[float]] = None,
    kind: TraceKind = TraceKind.CHORDAL,
    initial: float = 0.0,
    threads: Optional[int] = None,
    chunk_size: int = 64,
    offset: int = 0,
) -> TraceBatch:
    """
    Many independent traces on one evaluation grid.

    Trace ``i`` is driven by the stream seeded with derive_seed(seed, offset + i),
    so rows do not depend on chunking or thread count.
    """
    validate_driving_params(kappa, horizon, n_steps, seed)
    if int(n_traces) != n_traces or n_traces < 1:
        raise ParameterError(f"n_traces must be a positive integer, got {n_traces}", n_traces=n_traces)
    if kind not in (TraceKind.CHORDAL, TraceKind.RADIAL):
        raise ParameterError(f"trace_batch supports chordal and radial traces, got {kind.value}")

    times = _check_eval_times(default_eval_times(horizon) if eval_times is None else eval_times, horizon)
    dt = horizon / n_steps
    seeds = np.array([derive_seed(seed, offset + i) for i in range(n_traces)], dtype=np.uint64)

    def run_chunk(start: int, stop: int) -> np.ndarray:
        values = np.empty((stop - start, n_steps + 1))
        for row, child in enumerate(seeds[start:stop]):
            values[row] = initial + brownian_path(kappa, horizon, n_steps, np.random.default_rng(int(child)))
        if kind == TraceKind.RADIAL:
            values = np.mod(values, TWO_PI)
        return _sorted_points(values, dt, times, kind)

    logger.debug(f"Simulating {n_traces} {kind.value} traces (kappa={kappa}, n_steps={n_steps})")
    blocks = map_chunks(run_chunk, n_traces, chunk_size, threads=threads)
    return TraceBatch(
        times=times,
        points=np.vstack(blocks),
        kind=kind,
        kappa=float(kappa),
        seed=int(seed),
        n_steps=int(n_steps),
        dt=dt,
        seeds=seeds,
    )


def half_plane_capacity(driving: DrivingFunction, t: Optional[float] = None) -> float:
    """
    Half-plane capacity of the hull at time ``t`` from the expansion at infinity.

    The inverse map satisfies f_t(w) = w - hcap/w + O(|w|^-2), so hcap is
    read off at a point far above the hull.
    """
    if driving.kind != TraceKind.CHORDAL:
        raise ParameterError("half_plane_capacity needs a chordal driving function")
    t = driving.horizon if t is None else float(t)
    times = _check_eval_times([t], driving.horizon)
    m, tau = _locate(times, driving.dt, driving.n_steps)
    if m[0] < 0:
        return 0.0

    values = driving.values[None, :]
    scale = 1.0 + math.sqrt(t) + float(np.max(np.abs(driving.values[: m[0] + 1])))
    w = np.array([[1j * 1e3 * scale]])
    z = chordal_slit_inverse(w, values[:, m[0] : m[0] + 1], tau[0])
    z = _pull_back(z, values, driving.dt, m, chordal_slit_inverse)
    return float(-((z[0, 0] - w[0, 0]) * w[0, 0]).real)


def map_trace(trace: Trace, fmap: "ConformalMap", h: Optional[float] = None) -> Trace:
    """
    Push a trace forward through a conformal map.

    Points within ``h`` of the source boundary are evaluated at their pullback
    into the domain and flagged approximate, unless the map extends
    continuously to the boundary.

    Raises:
        DomainError: a point lies outside the closed source domain
    """
    if h is None:
        h = tip_height(trace.dt) if trace.dt else 1e-6
    z = np.asarray(trace.points, dtype=complex)
    flags = np.array(trace.flags, dtype=bool)

    if fmap.source == SourceDomain.DISK:
        modulus = np.abs(z)
        if np.any(modulus > 1.0 + _OUTSIDE_TOL):
            raise DomainError(f"Trace leaves the unit disk (max |z| = {modulus.max():.6g})")
        near = modulus > 1.0 - h
        pulled = np.where(near, (1.0 - h) * z / np.where(modulus > 0, modulus, 1.0), z)
    else:
        if np.any(z.imag < -_OUTSIDE_TOL):
            raise DomainError(f"Trace leaves the upper half plane (min Im = {z.imag.min():.6g})")
        near = z.imag < h
        pulled = np.where(near, z.real + 1j * h, z)

    if fmap.boundary_continuous:
        image = np.empty_like(z)
        image[~near] = fmap.eval(z[~near])
        image[near] = fmap.eval_closure(z[near])
    else:
        image = fmap.eval(pulled)
        flags = flags | near

    if flags.any():
        logger.debug(f"map_trace: {int(flags.sum())} of {len(z)} points evaluated at pullback height {h:.3g}")
    return Trace(times=trace.times, points=image, kind=TraceKind.IMAGE, flags=flags, kappa=trace.kappa, seed=trace.seed)


def write_trace_csv(trace: Trace, path: Union[str, Path]) -> Path:
    """Write (time, re, im, flag) rows with 17 significant digits."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["time", "re", "im", "flag"])
        for t, p, flag in zip(trace.times, trace.points, trace.flags):
            writer.writerow([format_float(t), format_float(p.real), format_float(p.imag), int(flag)])
    return path


def read_trace_csv(path: Union[str, Path], kind: TraceKind = TraceKind.CHORDAL) -> Trace:
    """Load a trace written by write_trace_csv."""
    times, points, flags = [], [], []
    with open(path, "r", encoding="utf-8", newline="") as f:
        for row in csv.DictReader(f):
            times.append(float(row["time"]))
            points.append(complex(float(row["re"]), float(row["im"])))
            flags.append(bool(int(row.get("flag") or 0)))
    return Trace(times=np.array(times), points=np.array(points), kind=kind, flags=np.array(flags, dtype=bool))


def simulate(
    kappa: float,
    horizon: float,
    n_steps: int,
    seed: int,
    kind: TraceKind = TraceKind.CHORDAL,
    eval_times: Optional[Sequence[float]] = None,
    initial: float = 0.0,
):
    """Sample a driving function and its trace in one call."""
    driving_kind = TraceKind.RADIAL if kind == TraceKind.RADIAL else TraceKind.CHORDAL
    driving = sample_driving(kappa, horizon, n_steps, seed, kind=driving_kind, initial=initial)
    if kind == TraceKind.RADIAL:
        return driving, radial_trace(driving, eval_times)
    if kind == TraceKind.DISK_CHORDAL:
        return driving, chordal_disk_trace(driving, eval_times)
    return driving, chordal_trace(driving, eval_times)
