"""Integral means of |f'|^t over circles and image areas."""

import math
import threading
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from conformal.maps import ConformalMap
from const import MIN_CIRCLE_POINTS
from errors import ParameterError
from models.conformal import SourceDomain
from models.spectrum import IntegralMeans
from sieve.quadrature import gauss_nodes
from utils.logger import get_logger
from utils.parallel import map_items

logger = get_logger("spectrum")

# Relative change on point halving that triggers a precision warning
PRECISION_TOL = 0.01
# Circle points per unit of 1 / (1 - r)
POINTS_PER_SCALE = 16


def circle_points(radius: float, min_points: int = MIN_CIRCLE_POINTS) -> int:
    """Power of two >= max(min_points, 16 / (1 - r))."""
    need = max(min_points, POINTS_PER_SCALE / (1.0 - radius))
    return 1 << int(math.ceil(math.log2(need)))


class CircleSamples:
    """|f'| on equispaced circles, cached per (radius, points) and shared across exponents."""

    def __init__(self, fmap: ConformalMap):
        if fmap.source != SourceDomain.DISK:
            raise ParameterError("integral means need a map defined on the disk")
        self.fmap = fmap
        self._cache: Dict[Tuple[float, int], np.ndarray] = {}
        self._lock = threading.Lock()

    def modulus(self, radius: float, n: int) -> np.ndarray:
        key = (float(radius), int(n))
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            return cached
        theta = 2.0 * np.pi * np.arange(n) / n
        values = np.abs(self.fmap.deriv(radius * np.exp(1j * theta)))
        with self._lock:
            self._cache[key] = values
        return values

    def mean(self, t: float, radius: float, min_points: int = MIN_CIRCLE_POINTS) -> Tuple[float, float, int]:
        """(full value, value from every second point, points used)."""
        n = circle_points(radius, min_points)
        d = self.modulus(radius, n)
        powered = d**t
        full = 2.0 * np.pi * radius * float(np.mean(powered))
        half = 2.0 * np.pi * radius * float(np.mean(powered[::2]))
        return full, half, n

    def clear(self) -> None:
        with self._lock:
            self._cache.clear()


def check_radii(radii: Sequence[float]) -> np.ndarray:
    r = np.asarray(radii, dtype=float)
    if r.ndim != 1 or r.size == 0:
        raise ParameterError("radii must be a non-empty list")
    if not np.all(np.isfinite(r)) or np.any(r <= 0) or np.any(r >= 1):
        raise ParameterError("radii must lie in (0, 1)", radii=r.tolist())
    return r


def integral_means(
    fmap: ConformalMap,
    t: float,
    radii: Sequence[float],
    min_points: int = MIN_CIRCLE_POINTS,
    samples: Optional[CircleSamples] = None,
    threads: Optional[int] = None,
) -> IntegralMeans:
    """
    Trapezoid values of the circle integral of |f'|^t at each radius.

    Args:
        fmap: Map defined on the disk
        t: Exponent
        radii: Radii in (0, 1)
        min_points: Circle points, at least 2^12
        samples: Cache to reuse across exponents
        threads: Worker threads for the per-radius integrals

    Returns:
        IntegralMeans; radii where halving the point count changes the value
        by more than 1% are listed in ``precision_warnings``
    """
    if not math.isfinite(t):
        raise ParameterError(f"t must be finite, got {t}", t=t)
    if min_points < MIN_CIRCLE_POINTS:
        raise ParameterError(f"circle quadrature needs at least {MIN_CIRCLE_POINTS} points", min_points=min_points)
    r = check_radii(radii)
    samples = samples or CircleSamples(fmap)

    results = map_items(lambda radius: samples.mean(t, float(radius), min_points), list(r), threads)
    means, warnings, points = [], [], []
    for radius, (full, half, n) in zip(r, results):
        means.append(full)
        points.append(n)
        if abs(full - half) > PRECISION_TOL * abs(full):
            warnings.append(float(radius))
    if warnings:
        logger.warning(f"Integral means at t={t}: precision warning at {len(warnings)} radii")
    return IntegralMeans(t=float(t), radii=r.tolist(), means=means, points=points, precision_warnings=warnings)


def image_area(
    fmap: ConformalMap,
    r_inner: float,
    r_outer: float = 1.0,
    order: int = 32,
    samples: Optional[CircleSamples] = None,
) -> float:
    """
    Area of f({r_inner < |z| < r_outer}) as the r-integral of the t = 2 means.

    Raises:
        ParameterError: unbounded image or radii outside [0, 1]
    """
    if not fmap.bounded_image:
        raise ParameterError(f"{fmap.kind.value} map has an unbounded image")
    if not 0 <= r_inner < r_outer <= 1:
        raise ParameterError(f"need 0 <= r_inner < r_outer <= 1, got {r_inner}, {r_outer}")
    x, w = gauss_nodes(order)
    radii = r_inner + (r_outer - r_inner) * x
    means = integral_means(fmap, 2.0, radii, samples=samples).means
    return math.fsum(float(m) * float(wi) for m, wi in zip(means, w)) * (r_outer - r_inner)
