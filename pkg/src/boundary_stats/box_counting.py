"""Box-counting estimators for point sets, polylines and line intersections."""

from typing import Optional, Sequence

import numpy as np
from scipy.stats import linregress

from conformal.geometry import densify
from errors import ParameterError
from models.boundary import BoxCount

DEFAULT_SCALES = [2.0**-j for j in range(3, 8)]


def check_scales(scales: Optional[Sequence[float]]) -> np.ndarray:
    s = np.asarray(DEFAULT_SCALES if scales is None else scales, dtype=float)
    if s.ndim != 1 or s.size < 2:
        raise ParameterError("box counting needs at least two scales")
    if not np.all(np.isfinite(s)) or np.any(s <= 0):
        raise ParameterError("scales must be positive", scales=s.tolist())
    if np.unique(s).size != s.size:
        raise ParameterError("scales must be distinct", scales=s.tolist())
    return s


def box_counts(points, scales: Sequence[float]) -> np.ndarray:
    """Number of occupied boxes of side ``scale`` on the grid anchored at 0."""
    z = np.asarray(points, dtype=complex).ravel()
    counts = np.zeros(len(scales))
    if z.size == 0:
        return counts
    for i, s in enumerate(scales):
        cells = np.column_stack([np.floor(z.real / s), np.floor(z.imag / s)]).astype(np.int64)
        counts[i] = np.unique(cells, axis=0).shape[0]
    return counts


def line_box_counts(points, scales: Sequence[float], window: float = 2.0) -> np.ndarray:
    """
    Boxes of side eta on [-window, window] touched by points with |Im| < eta.

    One count per scale; the thickened line shrinks with the scale.
    """
    z = np.asarray(points, dtype=complex).ravel()
    counts = np.zeros(len(scales))
    for i, eta in enumerate(scales):
        near = z[(np.abs(z.imag) < eta) & (np.abs(z.real) <= window)]
        if near.size:
            counts[i] = np.unique(np.floor((near.real + window) / eta)).size
    return counts


def fit_box_dimension(scales: Sequence[float], counts: Sequence[float]) -> BoxCount:
    """Slope of log N against log 1/scale."""
    s = np.asarray(scales, dtype=float)
    n = np.asarray(counts, dtype=float)
    keep = n > 0
    if keep.sum() < 2:
        raise ParameterError("need positive box counts at two scales or more")
    fit = linregress(np.log(1.0 / s[keep]), np.log(n[keep]))
    return BoxCount(
        scales=s.tolist(),
        counts=n.tolist(),
        slope=float(fit.slope),
        r_squared=float(fit.rvalue**2),
        intercept=float(fit.intercept),
        stderr=float(fit.stderr),
    )


def box_counting_dimension(points, scales: Optional[Sequence[float]] = None, polyline: bool = True) -> BoxCount:
    """
    Box-counting slope of a point set.

    Args:
        points: Complex points
        scales: Box sides (default 2^-3..2^-7)
        polyline: Treat the points as a polyline and densify it to a quarter of the finest scale

    Returns:
        BoxCount with per-scale counts and the fitted slope
    """
    s = check_scales(scales)
    z = np.asarray(points, dtype=complex).ravel()
    if polyline and z.size > 1:
        z = densify(z, float(s.min()) / 4.0)
    return fit_box_dimension(s, box_counts(z, s))
