"""Classification of dyadic squares into good and bad ones."""

import math
from typing import List, Optional

import numpy as np

from conformal.maps import ConformalMap
from const import DEFAULT_QUADRATURE_ORDER, MAX_QUADRATURE_ORDER, MAX_SQUARES
from errors import ParameterError, ResourceError
from models.conformal import SourceDomain
from models.sieve import ChainReport, DyadicSquare, RefinedBudget, SieveMode, SieveResult
from sieve.quadrature import REFINE_RATIO, integrate_squares
from sieve.squares import content_of
from spectrum.means import CircleSamples, image_area, integral_means
from utils.logger import get_logger
from utils.parallel import map_chunks
from utils.settings import section

logger = get_logger("sieve")

# Squares integrated per worker call
SQUARE_CHUNK = 1024
CHAIN_TOLERANCE = 1e-3


def refined_parameters(p: float):
    """(t, delta) = (sqrt(1 - p), 5 t^2) for the refined sieve."""
    t = math.sqrt(1.0 - p)
    return t, 5.0 * t * t


def total_squares(N: int, n_max: int) -> int:
    """Number of squares in generations N..n_max."""
    return 2 ** (n_max + 1) - 2**N


def _validate(p: float, N: int, n_max: int, order: int, max_squares: int) -> None:
    if not math.isfinite(p) or not 0 < p < 1:
        raise ParameterError(f"p must lie in (0, 1), got {p}", p=p)
    if int(N) != N or N < 1:
        raise ParameterError(f"N must be an integer >= 1, got {N}", N=N)
    if int(n_max) != n_max or n_max < N:
        raise ParameterError(f"n_max must be an integer >= N, got {n_max}", n_max=n_max)
    if int(order) != order or order < 4:
        raise ParameterError(f"quadrature order must be an integer >= 4, got {order}", order=order)
    total = total_squares(int(N), int(n_max))
    if total > max_squares:
        raise ResourceError(
            f"generations {N}..{n_max} hold {total} squares, budget is {max_squares}",
            squares=total,
            budget=max_squares,
        )


def classify_squares(
    fmap: ConformalMap,
    p: float,
    N: int,
    mode: SieveMode = SieveMode.BOUNDED,
    n_max: Optional[int] = None,
    quadrature_order: Optional[int] = None,
    max_squares: Optional[int] = None,
    threads: Optional[int] = None,
) -> SieveResult:
    """
    Mark the squares of generations N..n_max whose weight integral exceeds the threshold.

    Args:
        fmap: Map defined on the disk
        p: Content exponent in (0, 1)
        N: First generation scanned
        mode: BOUNDED, UNBOUNDED or REFINED
        n_max: Last generation (config default)
        quadrature_order: Gauss-Legendre order per direction (config default)
        max_squares: Square budget (config default)
        threads: Worker threads

    Returns:
        SieveResult; threshold is l(Q)^p, or l(Q)^(p - delta) with
        t = sqrt(1 - p) and delta = 5 t^2 in refined mode
    """
    cfg = section("sieve")
    n_max = int(cfg.get("n_max", 14) if n_max is None else n_max)
    order = cfg.get("quadrature_order", DEFAULT_QUADRATURE_ORDER) if quadrature_order is None else quadrature_order
    max_squares = int(cfg.get("max_squares", MAX_SQUARES) if max_squares is None else max_squares)
    max_order = int(cfg.get("max_quadrature_order", MAX_QUADRATURE_ORDER))
    refine_ratio = float(cfg.get("refine_ratio", REFINE_RATIO))
    mode = SieveMode(mode)
    _validate(p, N, n_max, order, max_squares)
    if fmap.source != SourceDomain.DISK:
        raise ParameterError("the sieve needs a map defined on the disk")

    t_exp, delta = (None, None)
    exponent = p
    if mode == SieveMode.REFINED:
        t_exp, delta = refined_parameters(p)
        exponent = p - delta

    logger.info(f"Sieve {mode.value}: p={p} N={N} n_max={n_max} ({total_squares(N, n_max)} squares)")
    bad: List[DyadicSquare] = []
    weights: List[float] = []
    for n in range(int(N), n_max + 1):
        threshold = 2.0 ** (-n * exponent)

        def work(start: int, stop: int, n=n):
            squares = [DyadicSquare(n, k) for k in range(start, stop)]
            return integrate_squares(
                fmap,
                squares,
                mode,
                t_exp=t_exp if t_exp is not None else 2.0,
                quadrature_order=int(order),
                max_order=max_order,
                refine_ratio=refine_ratio,
            )

        values = np.concatenate(map_chunks(work, 2**n, SQUARE_CHUNK, threads))
        hits = np.flatnonzero(values > threshold)
        bad.extend(DyadicSquare(n, int(k)) for k in hits)
        weights.extend(float(v) for v in values[hits])
        logger.debug(f"Generation {n}: {hits.size} of {2**n} squares bad")

    result = SieveResult(
        mode=mode,
        p=float(p),
        N=int(N),
        n_max=n_max,
        bad_squares=bad,
        content_bound=content_of(bad, p),
        quadrature_order=int(order),
        bad_weights=weights,
        delta=delta,
        t=t_exp,
        squares_scanned=total_squares(N, n_max),
        map_descriptor=fmap.to_dict(),
    )
    logger.info(f"Sieve done: {len(bad)} bad squares, content bound {result.content_bound:.6g}")
    return result


def chain_inequality(
    fmap: ConformalMap,
    sieve: SieveResult,
    tolerance: float = CHAIN_TOLERANCE,
    samples: Optional[CircleSamples] = None,
) -> ChainReport:
    """
    The three sides of sum l(Q)^p <= sum of |f'|^2 integrals over T(Q) <= area of f(annulus).

    The annulus is {1 - 2^-N < |z| < 1}; needs a map with bounded image.
    """
    if sieve.mode == SieveMode.BOUNDED:
        weight_sum = math.fsum(sieve.bad_weights)
    else:
        values = integrate_squares(fmap, sieve.bad_squares, SieveMode.BOUNDED, quadrature_order=sieve.quadrature_order)
        weight_sum = math.fsum(float(v) for v in values)
    area = image_area(fmap, 1.0 - 2.0 ** (-sieve.N), 1.0, samples=samples)
    report = ChainReport(content=sieve.content_bound, weight_sum=weight_sum, annulus_area=area, tolerance=tolerance)
    if not (report.lower_ok and report.upper_ok):
        logger.warning(f"Chain inequality fails: {report.to_dict()}")
    return report


def refined_budget(
    fmap: ConformalMap,
    sieve: SieveResult,
    tolerance: float = CHAIN_TOLERANCE,
    samples: Optional[CircleSamples] = None,
) -> RefinedBudget:
    """
    Per-generation terms 2^(-n delta) times the circle integral of |f'|^t at 1 - 2^-n,
    against the content of the bad squares of that generation.
    """
    if sieve.mode != SieveMode.REFINED or sieve.t is None or sieve.delta is None:
        raise ParameterError("refined budget needs a refined-mode sieve")
    generations = list(range(sieve.N, sieve.n_max + 1))
    radii = [1.0 - 2.0 ** (-n) for n in generations]
    means = integral_means(fmap, sieve.t, radii, samples=samples).means
    terms = [2.0 ** (-n * sieve.delta) * m for n, m in zip(generations, means)]
    by_gen = sieve.bad_by_generation
    content = [len(by_gen.get(n, ())) * 2.0 ** (-n * sieve.p) for n in generations]
    return RefinedBudget(generations=generations, terms=terms, content=content, tolerance=tolerance)
