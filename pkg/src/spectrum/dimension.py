"""Spectrum regression, the universal bound and the John-domain dimension equation."""

import math
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.stats import linregress

from conformal.maps import ConformalMap
from const import R_SQUARED_MIN, SPECTRUM_J_RANGE, UNIVERSAL_BOUND_TOL
from errors import ParameterError, PreconditionError
from models.spectrum import BoundCheck, CoveringSum, JohnDimension, SpectrumEstimate
from spectrum.means import CircleSamples, integral_means
from utils.logger import get_logger
from utils.settings import section

logger = get_logger("spectrum")

# Log-means spread below which a fit is a confident zero slope
FLAT_SPREAD = 0.05
# Allowed rise of F(d) = beta(d) - d + flat between grid points
MONOTONE_TOL = 0.05
BRACKET_OFFSET = 0.01
ROOT_XTOL = 1e-3


def dyadic_radii(j_min: Optional[int] = None, j_max: Optional[int] = None) -> List[float]:
    """Radii 1 - 2^-j for j = j_min..j_max (config defaults 4..12)."""
    cfg = section("spectrum")
    j_min = int(cfg.get("j_min", SPECTRUM_J_RANGE[0]) if j_min is None else j_min)
    j_max = int(cfg.get("j_max", SPECTRUM_J_RANGE[1]) if j_max is None else j_max)
    if not 1 <= j_min < j_max:
        raise ParameterError(f"need 1 <= j_min < j_max, got {j_min}, {j_max}")
    return [1.0 - 2.0 ** (-j) for j in range(j_min, j_max + 1)]


def estimate_beta(
    fmap: ConformalMap,
    t: float,
    radii: Optional[Sequence[float]] = None,
    samples: Optional[CircleSamples] = None,
    threads: Optional[int] = None,
) -> SpectrumEstimate:
    """
    Least-squares slope of log means against log 1/(1 - r).

    The raw slope is reported (no clamping at 0). Fits with r^2 below the
    configured minimum are flagged ``low_confidence`` unless the means are flat.
    """
    radii = dyadic_radii() if radii is None else list(radii)
    if len(radii) < 3:
        raise ParameterError("spectrum regression needs at least 3 radii")
    means = integral_means(fmap, t, radii, samples=samples, threads=threads)
    x = np.log(1.0 / (1.0 - np.asarray(means.radii)))
    y = np.log(np.asarray(means.means))
    fit = linregress(x, y)
    r_squared = float(fit.rvalue**2)
    flat = float(np.ptp(y)) < FLAT_SPREAD
    r_min = float(section("spectrum").get("r_squared_min", R_SQUARED_MIN))
    low = (r_squared < r_min) and not flat
    if low:
        logger.warning(f"Spectrum fit at t={t} has r^2 = {r_squared:.3f}; marked low confidence")
    return SpectrumEstimate(
        t=float(t),
        radii=means.radii,
        means=means.means,
        beta_hat=float(fit.slope),
        r_squared=r_squared,
        intercept=float(fit.intercept),
        stderr=float(fit.stderr),
        low_confidence=low,
        precision_warnings=means.precision_warnings,
        bounded_image=fmap.bounded_image,
    )


def check_universal_bound(estimate: SpectrumEstimate, tolerance: Optional[float] = None) -> BoundCheck:
    """Margin 4 t^2 - beta_hat; passes when the margin exceeds -tolerance."""
    if tolerance is None:
        tolerance = float(section("spectrum").get("universal_bound_tolerance", UNIVERSAL_BOUND_TOL))
    bound = 4.0 * estimate.t**2
    margin = bound - estimate.beta_hat
    passed = margin > -tolerance
    if not passed:
        logger.error(f"Universal bound violated at t={estimate.t}: beta_hat={estimate.beta_hat:.4f} > {bound:.4f}")
    return BoundCheck(
        t=estimate.t,
        beta_hat=estimate.beta_hat,
        bound=bound,
        margin=margin,
        tolerance=tolerance,
        passed=passed,
        low_confidence=estimate.low_confidence,
    )


def _check_kappa(kappa: float, upper_closed: bool = True) -> float:
    kappa = float(kappa)
    ok = 4.0 < kappa <= 8.0 if upper_closed else 4.0 < kappa < 8.0
    if not math.isfinite(kappa) or not ok:
        rng = "(4, 8]" if upper_closed else "(4, 8)"
        raise ParameterError(f"kappa must lie in {rng}, got {kappa}", kappa=kappa)
    return kappa


def solve_john_dimension(
    fmap: ConformalMap,
    kappa: float,
    radii: Optional[Sequence[float]] = None,
    samples: Optional[CircleSamples] = None,
    xtol: float = ROOT_XTOL,
) -> JohnDimension:
    """
    Solve beta(d) = d - (2 - 8/kappa) for d in (2 - 8/kappa, 2).

    Without a sign change on the bracket the spectrum is too flat and the
    flat value 2 - 8/kappa is reported (or 2 when beta stays above the line).
    """
    kappa = _check_kappa(kappa)
    flat = 2.0 - 8.0 / kappa
    samples = samples or CircleSamples(fmap)
    evaluations = 0

    def F(d: float) -> float:
        nonlocal evaluations
        evaluations += 1
        return estimate_beta(fmap, d, radii=radii, samples=samples).beta_hat - d + flat

    lo, hi = flat + BRACKET_OFFSET, 2.0
    grid = np.linspace(lo, hi, 5)
    values = [F(float(d)) for d in grid]
    monotone = all(b <= a + MONOTONE_TOL for a, b in zip(values, values[1:]))
    if not monotone:
        logger.warning(f"F(d) is not monotone on [{lo:.3f}, 2] for kappa={kappa}")

    f_lo, f_hi = values[0], values[-1]
    if f_lo <= 0:
        return JohnDimension(
            kappa=kappa,
            d=flat,
            flat_value=flat,
            solved=False,
            monotone=monotone,
            evaluations=evaluations,
            note="no sign change: spectrum flat on the bracket, flat value reported",
        )
    if f_hi > 0:
        return JohnDimension(
            kappa=kappa,
            d=2.0,
            flat_value=flat,
            solved=False,
            monotone=monotone,
            evaluations=evaluations,
            note="no sign change: spectrum above the line on the bracket, upper endpoint reported",
        )

    # narrow to the grid cell holding the sign change
    idx = next(i for i in range(len(values) - 1) if values[i] > 0 >= values[i + 1])
    d = float(brentq(F, float(grid[idx]), float(grid[idx + 1]), xtol=xtol))
    logger.info(f"John dimension root for kappa={kappa}: d={d:.4f} after {evaluations} evaluations")
    return JohnDimension(kappa=kappa, d=d, flat_value=flat, solved=True, monotone=monotone, evaluations=evaluations)


def covering_sum(
    fmap: ConformalMap,
    t: float,
    kappa: float,
    N: int,
    n_max: Optional[int] = None,
    samples: Optional[CircleSamples] = None,
) -> CoveringSum:
    """
    Terms 2^(-n (t - 2 + 8/kappa)) times the circle integral at radius 1 - 2^-n, n = N..n_max.

    The verdict is convergent iff beta_hat(t) < t - (2 - 8/kappa).
    """
    kappa = _check_kappa(kappa)
    flat = 2.0 - 8.0 / kappa
    if not t >= flat - 1e-12:
        raise PreconditionError(f"covering sum needs t >= 2 - 8/kappa = {flat:.6g}, got {t}", t=t)
    n_max = int(section("spectrum").get("j_max", SPECTRUM_J_RANGE[1]) if n_max is None else n_max)
    if int(N) != N or not 1 <= N <= n_max:
        raise ParameterError(f"need 1 <= N <= n_max, got N={N}, n_max={n_max}", N=N)
    samples = samples or CircleSamples(fmap)

    generations = list(range(int(N), n_max + 1))
    means = integral_means(fmap, t, [1.0 - 2.0 ** (-n) for n in generations], samples=samples).means
    gap = t - flat
    terms = [2.0 ** (-n * gap) * m for n, m in zip(generations, means)]
    partial = [math.fsum(terms[: i + 1]) for i in range(len(terms))]
    beta_hat = estimate_beta(fmap, t, samples=samples).beta_hat
    return CoveringSum(
        t=float(t),
        kappa=kappa,
        generations=generations,
        terms=terms,
        partial_sums=partial,
        beta_hat=beta_hat,
        convergent=beta_hat < gap,
    )
