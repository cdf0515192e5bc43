"""Brownian driving functions for chordal and radial Loewner evolutions."""

import csv
import math
from pathlib import Path
from typing import Union

import numpy as np

from errors import ParameterError
from models.loewner import DrivingFunction, TraceKind
from utils.formatters import format_float

TWO_PI = 2.0 * math.pi


def _check_finite(**params) -> None:
    for name, value in params.items():
        if value is None or not math.isfinite(float(value)):
            raise ParameterError(f"{name} must be finite, got {value!r}", **{name: value})


def validate_driving_params(kappa: float, horizon: float, n_steps: int, seed: int) -> None:
    """Raise ParameterError unless kappa >= 0, horizon > 0, n_steps >= 1 and seed is a 64-bit integer."""
    _check_finite(kappa=kappa, horizon=horizon)
    if kappa < 0:
        raise ParameterError(f"kappa must be >= 0, got {kappa}", kappa=kappa)
    if horizon <= 0:
        raise ParameterError(f"horizon must be > 0, got {horizon}", horizon=horizon)
    if int(n_steps) != n_steps or n_steps < 1:
        raise ParameterError(f"n_steps must be a positive integer, got {n_steps}", n_steps=n_steps)
    if int(seed) != seed or not 0 <= int(seed) < 2**64:
        raise ParameterError(f"seed must be an integer in [0, 2**64), got {seed}", seed=seed)


def brownian_path(kappa: float, horizon: float, n_steps: int, rng: np.random.Generator) -> np.ndarray:
    """Cumulative sum of N(0, kappa * dt) increments, starting at 0."""
    dt = horizon / n_steps
    path = np.zeros(n_steps + 1)
    if kappa > 0:
        path[1:] = np.cumsum(math.sqrt(kappa * dt) * rng.standard_normal(n_steps))
    else:
        # consume the stream anyway so seeds stay aligned across kappa values
        rng.standard_normal(n_steps)
    return path


def sample_driving(
    kappa: float,
    horizon: float,
    n_steps: int,
    seed: int,
    kind: TraceKind = TraceKind.CHORDAL,
    initial: float = 0.0,
) -> DrivingFunction:
    """
    Sample sqrt(kappa) * Brownian motion on a uniform grid of ``n_steps`` steps.

    Args:
        kappa: SLE parameter (>= 0)
        horizon: Final capacity time
        n_steps: Number of time steps
        seed: 64-bit seed; identical seeds reproduce identical paths
        kind: CHORDAL (real values) or RADIAL (angles, stored mod 2*pi)
        initial: Starting value (radial: initial boundary angle)

    Returns:
        DrivingFunction with ``n_steps + 1`` samples
    """
    validate_driving_params(kappa, horizon, n_steps, seed)
    _check_finite(initial=initial)

    rng = np.random.default_rng(int(seed))
    values = initial + brownian_path(float(kappa), float(horizon), int(n_steps), rng)
    if kind == TraceKind.RADIAL:
        values = np.mod(values, TWO_PI)

    times = np.linspace(0.0, float(horizon), int(n_steps) + 1)
    return DrivingFunction(times=times, values=values, kappa=float(kappa), seed=int(seed), kind=kind)


def write_driving_csv(driving: DrivingFunction, path: Union[str, Path]) -> Path:
    """Write (time, value) rows with 17 significant digits."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["time", "value"])
        for t, w in zip(driving.times, driving.values):
            writer.writerow([format_float(t), format_float(w)])
    return path


def read_driving_csv(
    path: Union[str, Path], kappa: float = 0.0, seed: int = 0, kind: TraceKind = TraceKind.CHORDAL
) -> DrivingFunction:
    """Load a driving function written by write_driving_csv."""
    times, values = [], []
    with open(path, "r", encoding="utf-8", newline="") as f:
        for row in csv.DictReader(f):
            times.append(float(row["time"]))
            values.append(float(row["value"]))
    if len(times) < 2:
        raise ParameterError(f"{path}: driving function needs at least two samples")
    return DrivingFunction(times=np.array(times), values=np.array(values), kappa=kappa, seed=seed, kind=kind)
