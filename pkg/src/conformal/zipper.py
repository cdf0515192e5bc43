"""Boundary-fitted Riemann maps by the geodesic zipper.

Forward direction (domain -> disk):
  1. z -> i * sqrt((z - z1) / (z - z0)) opens the first edge onto the real line.
  2. For each further vertex with current image zeta, a real Mobius map sends the
     geodesic from 0 to zeta onto a vertical segment which is then unzipped by
     w -> sqrt(w^2 + y0^2).
  3. z -> sigma * (z / (1 - z/p))^2 closes the last edge (p = image of z0).
  4. A Mobius map onto the disk sends the chosen centre to 0; a rotation
     makes f'(0) > 0.
The conformal map f: disk -> domain evaluates the inverse steps in reverse.
"""

import cmath
import math
from typing import Any, Dict, Optional

import numpy as np

from conformal.geometry import CurveDistance, check_simple, contains, interior_point, orient_ccw, subdivide
from conformal.maps import ConformalMap, register_loader
from const import ZIPPER_MAX_VERTICES, ZIPPER_MIN_VERTICES
from errors import GeometryError, NumericError, ResourceError
from loewner.slit_maps import upper_sqrt
from models.conformal import JordanCurve, MapKind
from utils.logger import get_logger

logger = get_logger("zipper")

# Images with Im below this fraction of their modulus are treated as real
_REAL_TOL = 1e-10


def _open_first_edge(z, z0: complex, z1: complex):
    return 1j * np.sqrt((z - z1) / (z - z0))


def _unzip(z, a: float, y0: float):
    w = z / (1.0 - a * z)
    return upper_sqrt(w * w + y0 * y0, w)


def _unzip_inf(p_inv: float, a: float, y0: float) -> float:
    """Track 1/p for the real boundary point p (p_inv = 0 means p = infinity)."""
    p_inv = p_inv - a
    if p_inv == 0:
        return 0.0
    p = 1.0 / p_inv
    return 1.0 / (math.copysign(math.sqrt(p * p + y0 * y0), p))


class BoundaryFittedMap(ConformalMap):
    """
    Conformal map from the disk onto the interior of a Jordan polygon.

    Attributes:
        curve: the (oriented, resampled) polygon the map was fitted to
        center: f(0)
        steps: array of (a, y0) pairs, one per unzipped vertex
    """

    kind = MapKind.BOUNDARY_FITTED

    def __init__(
        self,
        curve: JordanCurve,
        z0: complex,
        z1: complex,
        steps: np.ndarray,
        p_inv: float,
        sigma: float,
        q: complex,
        rotation: float,
        center: complex,
        source_curve: Optional[JordanCurve] = None,
    ):
        self.curve = curve
        self.source_curve = source_curve or curve
        self.z0 = complex(z0)
        self.z1 = complex(z1)
        self.steps = np.asarray(steps, dtype=float).reshape(-1, 2)
        self.p_inv = float(p_inv)
        self.sigma = float(sigma)
        self.q = complex(q)
        self.rotation = float(rotation)
        self.center = complex(center)
        self._distance: Optional[CurveDistance] = None

    # inverse pieces, disk -> domain

    def _to_half_plane(self, u):
        u = u * cmath.exp(-1j * self.rotation)
        h = (self.q - u * self.q.conjugate()) / (1.0 - u)
        dh = cmath.exp(-1j * self.rotation) * (self.q - self.q.conjugate()) / (1.0 - u) ** 2
        return h, dh

    def _unsquare(self, h):
        if self.sigma > 0:
            t = np.sqrt(h)
        else:
            t = -np.sqrt(-h)
        dt = self.sigma / (2.0 * t)
        v = t / (1.0 + t * self.p_inv)
        dv = 1.0 / (1.0 + t * self.p_inv) ** 2
        return v, dt * dv

    def _rezip(self, s, with_deriv: bool):
        d = np.ones_like(s) if with_deriv else None
        for a, y0 in self.steps[::-1]:
            w = upper_sqrt(s * s - y0 * y0, s)
            z = w / (1.0 + a * w)
            if with_deriv:
                d = d * (s / w) / (1.0 + a * w) ** 2
            s = z
        return s, d

    def _close_first_edge(self, v):
        v2 = v * v
        z = (self.z1 + v2 * self.z0) / (1.0 + v2)
        dz = 2.0 * v * (self.z0 - self.z1) / (1.0 + v2) ** 2
        return z, dz

    def _eval(self, u):
        h, _ = self._to_half_plane(u)
        v, _ = self._unsquare(h)
        s, _ = self._rezip(v, with_deriv=False)
        z, _ = self._close_first_edge(s)
        return z

    def _deriv(self, u):
        h, dh = self._to_half_plane(u)
        v, dv = self._unsquare(h)
        s, ds = self._rezip(v, with_deriv=True)
        _, dz = self._close_first_edge(s)
        return dz * ds * dv * dh

    # forward direction, domain -> disk

    def inverse_eval(self, z):
        """Map points of the domain to the disk."""
        z = np.asarray(z, dtype=complex)
        w = _open_first_edge(z, self.z0, self.z1)
        for a, y0 in self.steps:
            w = _unzip(w, a, y0)
        t = w / (1.0 - w * self.p_inv)
        h = self.sigma * t * t
        return cmath.exp(1j * self.rotation) * (h - self.q) / (h - self.q.conjugate())

    def boundary_distance(self, w):
        if self._distance is None:
            self._distance = CurveDistance(self.source_curve.vertices, self.curve.max_spacing / 4.0)
        return self._distance(w)

    def params(self) -> Dict[str, Any]:
        return {
            "curve": self.curve.to_dict(),
            "source_curve": self.source_curve.to_dict() if self.source_curve is not self.curve else None,
            "z0": [self.z0.real, self.z0.imag],
            "z1": [self.z1.real, self.z1.imag],
            "steps": self.steps.tolist(),
            "p_inv": self.p_inv,
            "sigma": self.sigma,
            "q": [self.q.real, self.q.imag],
            "rotation": self.rotation,
            "center": [self.center.real, self.center.imag],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BoundaryFittedMap":
        """Reload a fitted map without refitting."""

        def c(pair):
            return complex(float(pair[0]), float(pair[1]))

        curve = JordanCurve.from_dict(data["curve"])
        source = JordanCurve.from_dict(data["source_curve"]) if data.get("source_curve") else None
        return cls(
            curve=curve,
            z0=c(data["z0"]),
            z1=c(data["z1"]),
            steps=np.asarray(data["steps"], dtype=float),
            p_inv=float(data["p_inv"]),
            sigma=float(data["sigma"]),
            q=c(data["q"]),
            rotation=float(data["rotation"]),
            center=c(data["center"]),
            source_curve=source,
        )

    def __repr__(self) -> str:
        return f"BoundaryFittedMap(vertices={self.curve.n_segments}, center={self.center:.6g})"


register_loader(MapKind.BOUNDARY_FITTED, BoundaryFittedMap.from_dict)


def build_boundary_map(
    curve: JordanCurve,
    center: Optional[complex] = None,
    min_vertices: int = ZIPPER_MIN_VERTICES,
    max_vertices: int = ZIPPER_MAX_VERTICES,
    check: bool = True,
) -> BoundaryFittedMap:
    """
    Fit a conformal map from the disk onto the interior of ``curve``.

    Args:
        curve: Closed polygon
        center: f(0); defaults to the centroid (or the nearest interior grid point)
        min_vertices: Edges are subdivided until at least this many vertices
        max_vertices: Larger inputs raise ResourceError
        check: Verify the polygon is simple first

    Returns:
        BoundaryFittedMap with f(0) = center and f'(0) > 0

    Raises:
        GeometryError: non-simple curve or centre outside it
        NumericError: an unzipped vertex left the upper half plane
    """
    if curve.n_segments > max_vertices:
        raise ResourceError(
            f"curve has {curve.n_segments} vertices, zipper limit is {max_vertices}",
            vertices=curve.n_segments,
        )
    source = orient_ccw(curve)
    if check:
        check_simple(source)
    fitted = subdivide(source, min_vertices)
    if center is None:
        center = interior_point(source)
    elif not contains(source, [center])[0]:
        raise GeometryError(f"center {center} lies outside the curve")

    pts = fitted.vertices[:-1]
    z0, z1 = complex(pts[0]), complex(pts[1])
    rest = _open_first_edge(pts[2:], z0, z1)
    w_center = complex(_open_first_edge(np.array([center]), z0, z1)[0])

    steps = np.empty((len(rest), 2))
    p_inv = 0.0
    for k in range(len(rest)):
        zeta = complex(rest[k])
        mod2 = abs(zeta) ** 2
        if zeta.imag <= _REAL_TOL * math.sqrt(mod2):
            if zeta.imag < -_REAL_TOL * math.sqrt(mod2):
                raise NumericError(
                    f"zipper vertex {k + 2} left the upper half plane (Im = {zeta.imag:.3g})",
                    vertex=k + 2,
                    image=[zeta.real, zeta.imag],
                )
            zeta = complex(zeta.real, _REAL_TOL * math.sqrt(mod2))
            mod2 = abs(zeta) ** 2
        a = zeta.real / mod2
        y0 = mod2 / zeta.imag
        steps[k] = (a, y0)
        rest[k + 1 :] = _unzip(rest[k + 1 :], a, y0)
        w_center = complex(_unzip(np.array([w_center]), a, y0)[0])
        p_inv = _unzip_inf(p_inv, a, y0)

    t_center = w_center / (1.0 - w_center * p_inv)
    sigma = 1.0 if t_center.real > 0 else -1.0
    q = sigma * t_center * t_center
    if not q.imag > 0:
        raise NumericError("zipper centre image left the upper half plane", center=[center.real, center.imag])

    fmap = BoundaryFittedMap(
        curve=fitted,
        z0=z0,
        z1=z1,
        steps=steps,
        p_inv=p_inv,
        sigma=sigma,
        q=q,
        rotation=0.0,
        center=complex(center),
        source_curve=source,
    )
    d0 = complex(fmap._deriv(np.array([0.0 + 0.0j]))[0])
    fmap.rotation = cmath.phase(d0)
    logger.info(f"Zipper map fitted: {len(pts)} vertices, f'(0) = {abs(d0):.6g}")
    return fmap
