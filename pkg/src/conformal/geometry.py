"""Polyline geometry helpers: simplicity, resampling, containment, distances."""

import numpy as np
from matplotlib.path import Path as MplPath
from scipy.spatial import cKDTree

from errors import GeometryError
from models.conformal import JordanCurve
from utils.logger import get_logger

logger = get_logger("geometry")

# Rows of the segment-pair matrix processed at once
_CHUNK = 256


def _cross(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a.real * b.imag - a.imag * b.real


def find_self_intersection(curve: JordanCurve):
    """
    First pair of non-adjacent segments that properly intersect, or None.

    Chunked O(n^2) orientation test.
    """
    z = curve.vertices
    p, q = z[:-1], z[1:]
    n = len(p)
    if n < 3:
        return None
    if len(np.unique(np.round(p, 15))) < n:
        return ("duplicate", None)

    d = q - p
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        i = np.arange(start, stop)[:, None]
        j = np.arange(n)[None, :]
        pi, di = p[i], d[i]
        pj, dj = p[j], d[j]
        o1 = _cross(di, pj - pi)
        o2 = _cross(di, pj + dj - pi)
        o3 = _cross(dj, pi - pj)
        o4 = _cross(dj, pi + di - pj)
        hit = (o1 * o2 < 0) & (o3 * o4 < 0)
        # skip identical and adjacent segments (including the closing pair)
        adjacent = (np.abs(i - j) <= 1) | (np.abs(i - j) == n - 1)
        hit &= ~adjacent
        if hit.any():
            a, b = np.argwhere(hit)[0]
            return (int(start + a), int(b))
    return None


def check_simple(curve: JordanCurve) -> None:
    """Raise GeometryError if the closed polyline is not simple."""
    if curve.n_segments < 3:
        raise GeometryError(f"curve needs at least 3 segments, got {curve.n_segments}")
    if curve.vertices[0] != curve.vertices[-1]:
        raise GeometryError("curve is not closed")
    pair = find_self_intersection(curve)
    if pair is not None:
        if pair[0] == "duplicate":
            raise GeometryError("curve visits a vertex twice")
        raise GeometryError(f"segments {pair[0]} and {pair[1]} intersect", segments=pair)


def orient_ccw(curve: JordanCurve) -> JordanCurve:
    """Counter-clockwise copy of the curve."""
    if curve.signed_area >= 0:
        return curve
    return JordanCurve(vertices=curve.vertices[::-1].copy(), depth=curve.depth, flatness=curve.flatness)


def subdivide(curve: JordanCurve, min_vertices: int) -> JordanCurve:
    """Split every edge into k equal parts, k = ceil(min_vertices / n_segments); corners are kept."""
    n = curve.n_segments
    k = max(1, int(np.ceil(min_vertices / n)))
    if k == 1:
        return curve
    p = curve.vertices[:-1]
    d = np.diff(curve.vertices)
    s = np.arange(k) / k
    pts = (p[:, None] + s[None, :] * d[:, None]).ravel()
    return JordanCurve(vertices=np.append(pts, pts[0]), depth=curve.depth, flatness=curve.flatness)


def densify(points: np.ndarray, spacing: float) -> np.ndarray:
    """Insert points along a polyline so consecutive points are at most ``spacing`` apart."""
    z = np.asarray(points, dtype=complex)
    if len(z) < 2:
        return z
    d = np.diff(z)
    counts = np.maximum(1, np.ceil(np.abs(d) / spacing).astype(np.int64))
    seg = np.repeat(np.arange(len(d)), counts)
    offsets = np.arange(counts.sum()) - np.repeat(np.cumsum(counts) - counts, counts)
    out = z[seg] + (offsets / counts[seg]) * d[seg]
    return np.append(out, z[-1])


def contains(curve: JordanCurve, points) -> np.ndarray:
    """Point-in-polygon test."""
    pts = np.asarray(points, dtype=complex).ravel()
    path = MplPath(np.column_stack([curve.vertices.real, curve.vertices.imag]), closed=True)
    return path.contains_points(np.column_stack([pts.real, pts.imag]))


def interior_point(curve: JordanCurve, grid: int = 64) -> complex:
    """Area centroid if it lies inside, else the inside grid point nearest to it."""
    c = curve.centroid
    if contains(curve, [c])[0]:
        return c
    z = curve.vertices
    xs = np.linspace(z.real.min(), z.real.max(), grid)
    ys = np.linspace(z.imag.min(), z.imag.max(), grid)
    candidates = (xs[None, :] + 1j * ys[:, None]).ravel()
    inside = candidates[contains(curve, candidates)]
    if inside.size == 0:
        raise GeometryError("no interior grid point found")
    return complex(inside[np.argmin(np.abs(inside - c))])


class CurveDistance:
    """Nearest-point distance to a densified polyline via a KD-tree."""

    def __init__(self, vertices: np.ndarray, spacing: float):
        pts = densify(vertices, spacing)
        self.spacing = spacing
        self._tree = cKDTree(np.column_stack([pts.real, pts.imag]))

    def __call__(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=complex)
        dist, _ = self._tree.query(np.column_stack([w.ravel().real, w.ravel().imag]))
        return dist.reshape(w.shape)


def hausdorff_distance(a: np.ndarray, b: np.ndarray, spacing: float) -> float:
    """Symmetric Hausdorff distance between two polylines, resolved to ``spacing``."""
    da = CurveDistance(a, spacing)
    db = CurveDistance(b, spacing)
    return float(max(np.max(db(densify(a, spacing))), np.max(da(densify(b, spacing)))))
