"""Probability that a radial trace meets a small disc centred on the unit circle."""

import math
from typing import Optional, Sequence

import numpy as np
from scipy.stats import linregress

from boundary_stats.sampling import trace_rounds
from const import HITTING_DELTA, HITTING_HORIZON
from errors import ParameterError, PreconditionError
from loewner.traces import tip_height
from models.boundary import HittingEstimate, HittingExperiment, RatioTest
from models.loewner import TraceKind
from utils.logger import get_logger
from utils.settings import section

logger = get_logger("hitting")


def _settings(delta, horizon, n_steps):
    cfg = section("boundary")
    delta = float(cfg.get("hitting_delta", HITTING_DELTA) if delta is None else delta)
    horizon = float(cfg.get("horizon", HITTING_HORIZON) if horizon is None else horizon)
    n_steps = int(cfg.get("n_steps", 1000) if n_steps is None else n_steps)
    return delta, horizon, n_steps


def check_hitting_params(kappa: float, center_angle: float, radii: Sequence[float], delta: float, strict: bool) -> None:
    """
    Validate a hitting run.

    Strict runs need kappa in (4, 8), delta < |t| < pi - delta and every radius
    below delta/2. Non-strict runs (controls) only need positive radii.
    """
    if not all(math.isfinite(r) and r > 0 for r in radii):
        raise ParameterError("radii must be positive", radii=list(radii))
    if not math.isfinite(center_angle):
        raise ParameterError(f"center angle must be finite, got {center_angle}")
    if not strict:
        return
    if not 4.0 < kappa < 8.0:
        raise ParameterError(f"kappa must lie in (4, 8) for the hitting estimate, got {kappa}", kappa=kappa)
    if not 0 < delta < math.pi / 2:
        raise ParameterError(f"delta must lie in (0, pi/2), got {delta}", delta=delta)
    t = abs(math.remainder(center_angle, 2.0 * math.pi))
    if not delta < t < math.pi - delta:
        raise PreconditionError(f"need delta < |t| < pi - delta, got t={center_angle}, delta={delta}", t=center_angle)
    too_big = [r for r in radii if not r < delta / 2.0]
    if too_big:
        raise PreconditionError(f"radius must be below delta/2 = {delta / 2:.6g}, got {too_big[0]}", radius=too_big[0])


def min_distances(
    kappa: float,
    center_angle: float,
    n_traces: int,
    seed: int,
    horizon: float,
    n_steps: int,
    threads: Optional[int] = None,
    deadline: Optional[float] = None,
) -> np.ndarray:
    """Closest approach of each radial trace (started at 1) to exp(i t)."""
    target = complex(math.cos(center_angle), math.sin(center_angle))
    out = []
    for batch in trace_rounds(
        kappa, n_traces, seed, TraceKind.RADIAL, horizon, n_steps, threads=threads, deadline=deadline
    ):
        out.append(np.min(np.abs(batch.points - target), axis=1))
    return np.concatenate(out) if out else np.zeros(0)


def hitting_experiment(
    kappa: float,
    center_angle: float,
    radii: Sequence[float],
    n_traces: int,
    seed: int = 0,
    delta: Optional[float] = None,
    horizon: Optional[float] = None,
    n_steps: Optional[int] = None,
    strict: bool = True,
    threads: Optional[int] = None,
    deadline: Optional[float] = None,
) -> HittingExperiment:
    """
    Hit counts of one trace set for every radius.

    A trace hits B(exp(i t), r) when a sampled point lies within r + h,
    h the tip regularisation height. The same traces serve all radii, so the
    counts are non-decreasing in r. With at least two radii of positive
    estimate the exponent of P against r is fitted.
    """
    delta, horizon, n_steps = _settings(delta, horizon, n_steps)
    radii = [float(r) for r in radii]
    check_hitting_params(kappa, center_angle, radii, delta, strict)
    if int(n_traces) != n_traces or n_traces < 1:
        raise ParameterError(f"n_traces must be a positive integer, got {n_traces}", n_traces=n_traces)

    h = tip_height(horizon / n_steps)
    dist = min_distances(kappa, center_angle, int(n_traces), seed, horizon, n_steps, threads, deadline)
    done = int(dist.size)
    hits = [int(np.count_nonzero(dist <= r + h)) for r in radii]
    experiment = HittingExperiment(
        kappa=float(kappa),
        center_angle=float(center_angle),
        delta=delta,
        radii=radii,
        n_traces=done,
        hits_per_radius=hits,
        seed=int(seed),
        n_steps=n_steps,
        horizon=horizon,
        truncated=done < n_traces,
    )

    positive = [(r, k / done) for r, k in zip(radii, hits) if done and k > 0]
    if len(positive) >= 2 and len({r for r, _ in positive}) >= 2:
        fit = linregress(np.log([r for r, _ in positive]), np.log([q for _, q in positive]))
        experiment.exponent = float(fit.slope)
        experiment.exponent_r_squared = float(fit.rvalue**2)
    logger.info(f"Hitting kappa={kappa}: {done} traces, hits {hits}")
    return experiment


def hitting_probability(
    kappa: float,
    center_angle: float,
    radius: float,
    n_traces: int,
    seed: int = 0,
    delta: Optional[float] = None,
    horizon: Optional[float] = None,
    n_steps: Optional[int] = None,
    strict: bool = True,
    threads: Optional[int] = None,
) -> HittingEstimate:
    """Fraction of radial traces meeting B(exp(i t), r), with binomial standard error."""
    experiment = hitting_experiment(
        kappa, center_angle, [radius], n_traces, seed, delta, horizon, n_steps, strict=strict, threads=threads
    )
    return experiment.estimates()[0]


def ratio_test(experiment: HittingExperiment, r_large: float, r_small: float) -> RatioTest:
    """P(r_large) / P(r_small) against (r_large / r_small)^(8/kappa - 1)."""
    by_radius = {e.radius: e for e in experiment.estimates()}
    try:
        big, small = by_radius[float(r_large)], by_radius[float(r_small)]
    except KeyError as e:
        raise ParameterError(f"radius {e.args[0]} is not part of the experiment") from e
    if small.hits == 0 or big.hits == 0:
        raise PreconditionError("ratio test needs hits at both radii")
    ratio = big.estimate / small.estimate
    rel = math.hypot(big.stderr / big.estimate, small.stderr / small.estimate)
    expected = (r_large / r_small) ** experiment.predicted_exponent
    return RatioTest(ratio=ratio, expected=expected, stderr=ratio * rel)

