"""Disks punctured by boundary triangles and their probed John and Holder constants.

A triangle T(x, r), |x| = 1, is bounded by the arc of the unit circle inside
B(x, 2r) and the two segments from the arc endpoints to (1 - 2r) x. The
punctured disk is star-shaped about 0, so it is described exactly by its
polar boundary radius R(angle).
"""

import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import ndimage
from scipy.spatial import ConvexHull, QhullError
from scipy.stats import linregress

from conformal.maps import ConformalMap, IdentityMap
from conformal.zipper import build_boundary_map
from const import DISC_COVER_FACTOR, JOHN_GRID, JOHN_PROBES
from errors import GeometryError, ParameterError
from models.conformal import JordanCurve
from models.sieve import JohnDomainReport, SieveResult
from sieve.squares import disc_cover
from utils.logger import get_logger
from utils.settings import section

logger = get_logger("john")

Triangle = Tuple[complex, float]

POLAR_SAMPLES = 512
HOLDER_RADIUS = 1.0 - 2.0**-8
HOLDER_SCALES = [2.0**-j for j in range(2, 8)]
HOLDER_POINTS = 2048
BISECTIONS = 30


def _cross(a, b):
    return a.real * np.imag(b) - a.imag * np.real(b)


class PuncturedDisk:
    """The unit disk minus a union of closed boundary triangles."""

    def __init__(self, triangles: Sequence[Triangle]):
        self.triangles: List[Triangle] = []
        for x, r in triangles:
            x, r = complex(x), float(r)
            if abs(abs(x) - 1.0) > 1e-9:
                raise GeometryError(f"triangle centre {x} is not on the unit circle")
            if not 0 < r < 0.5:
                raise GeometryError(f"triangle radius must lie in (0, 1/2), got {r}", radius=r)
            self.triangles.append((x / abs(x), r))
        self._angles = np.array([math.atan2(x.imag, x.real) for x, _ in self.triangles])
        self._half_widths = np.array([2.0 * math.asin(r) for _, r in self.triangles])
        self._check_coverage()

    def _check_coverage(self) -> None:
        if not self.triangles:
            return
        lo = np.mod(self._angles - self._half_widths, 2.0 * np.pi)
        order = np.argsort(lo)
        lo = lo[order]
        hi = lo + 2.0 * self._half_widths[order]
        reach = hi[0]
        for a, b in zip(lo[1:], hi[1:]):
            if a > reach:
                return
            reach = max(reach, b)
        # last gap wraps past 2 pi
        if reach < lo[0] + 2.0 * np.pi:
            return
        raise GeometryError("triangles cover the whole unit circle")

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        inside = np.abs(z) < 1.0
        for (x, r), half in zip(self.triangles, self._half_widths):
            w = z * x.conjugate()
            apex = 1.0 - 2.0 * r
            e_plus = complex(math.cos(half), math.sin(half))
            e_minus = e_plus.conjugate()
            in_tri = (np.abs(w) < 1.0) & (_cross(e_plus - apex, w - apex) <= 0)
            in_tri &= _cross(e_minus - apex, w - apex) >= 0
            inside &= ~in_tri
        return inside

    def radius(self, theta) -> np.ndarray:
        """Boundary radius R(theta) along each ray from 0."""
        theta = np.asarray(theta, dtype=float)
        out = np.ones_like(theta)
        for (x, r), centre, half in zip(self.triangles, self._angles, self._half_widths):
            phi = np.angle(np.exp(1j * (theta - centre)))
            hit = np.abs(phi) <= half
            if not hit.any():
                continue
            apex = 1.0 - 2.0 * r
            edge = np.where(phi[hit] >= 0, np.exp(1j * half), np.exp(-1j * half))
            u = np.exp(1j * phi[hit])
            s = _cross(apex, edge - apex) / _cross(u, edge - apex)
            out[hit] = np.minimum(out[hit], s)
        return out

    def corner_angles(self) -> np.ndarray:
        return np.concatenate([self._angles, self._angles + self._half_widths, self._angles - self._half_widths])

    def polygon(self, samples: int = POLAR_SAMPLES) -> JordanCurve:
        """Polar polygon through the boundary, with every triangle corner as a vertex."""
        theta = np.concatenate([2.0 * np.pi * np.arange(samples) / samples, self.corner_angles()])
        theta = np.unique(np.round(np.mod(theta, 2.0 * np.pi), 12))
        z = self.radius(theta) * np.exp(1j * theta)
        return JordanCurve(vertices=np.append(z, z[0]))


def _segment_distance(w: np.ndarray, a: complex, b: complex) -> np.ndarray:
    d = b - a
    s = np.clip(((w - a) * np.conj(d)).real / (abs(d) ** 2), 0.0, 1.0)
    return np.abs(w - (a + s * d))


def _diameter(points: np.ndarray) -> float:
    if len(points) < 2:
        return 0.0
    xy = np.column_stack([points.real, points.imag])
    if len(points) >= 3:
        try:
            xy = xy[ConvexHull(xy).vertices]
        except QhullError:
            # collinear: two sweeps from any point find the extremes
            far = points[np.argmax(np.abs(points - points[0]))]
            return float(np.max(np.abs(points - far)))
    diff = xy[:, None, :] - xy[None, :, :]
    return float(np.sqrt(np.max(np.sum(diff * diff, axis=-1))))


class _Raster:
    def __init__(self, domain: PuncturedDisk, grid: int):
        self.cell = 2.0 / grid
        c = -1.0 + self.cell * (np.arange(grid) + 0.5)
        self.centers = c[None, :] + 1j * c[:, None]
        self.inside = domain.contains(self.centers)

    def simply_connected(self) -> bool:
        _, n_in = ndimage.label(self.inside)
        # pad so the corners outside the unit circle join into one component
        _, n_out = ndimage.label(np.pad(~self.inside, 1, constant_values=True))
        return n_in == 1 and n_out == 1

    def split(self, p: complex, q: complex) -> Optional[Tuple[float, float]]:
        """Diameters of the two largest pieces left after cutting along the chord pq."""
        u = (q - p) / abs(q - p)
        dist = _segment_distance(self.centers, p - u * self.cell, q + u * self.cell)
        labels, n = ndimage.label(self.inside & (dist > self.cell))
        if n < 2:
            return None
        sizes = np.bincount(labels.ravel())[1:]
        largest = np.argsort(sizes)[::-1][:2] + 1
        return tuple(_diameter(self.centers[labels == k]) for k in largest)


def _exit_point(domain: PuncturedDisk, start: complex, direction: complex, step: float) -> complex:
    s = step * np.arange(1, int(math.ceil(2.5 / step)) + 1)
    inside = domain.contains(start + s * direction)
    first_out = int(np.argmin(inside))
    lo = s[first_out - 1] if first_out > 0 else 0.0
    hi = s[first_out]
    for _ in range(BISECTIONS):
        mid = 0.5 * (lo + hi)
        if domain.contains(start + mid * direction):
            lo = mid
        else:
            hi = mid
    return start + lo * direction


def probe_john_constant(domain: PuncturedDisk, probes: int, grid: int, seed: int) -> Tuple[float, int, bool]:
    """
    Lower estimate of the John constant from random straight crosscuts.

    Each probe picks an interior point and a direction, cuts the domain along
    the chord through it and compares the smaller piece's diameter with the
    chord length. Returns (M, probes used, simply connected).
    """
    raster = _Raster(domain, grid)
    rng = np.random.default_rng(seed)
    best = 1.0
    used = 0
    for _ in range(int(probes)):
        while True:
            start = math.sqrt(rng.uniform()) * np.exp(1j * rng.uniform(0.0, 2.0 * math.pi))
            if domain.contains(start):
                break
        direction = complex(np.exp(1j * rng.uniform(0.0, math.pi)))
        p = _exit_point(domain, start, direction, raster.cell / 4.0)
        q = _exit_point(domain, start, -direction, raster.cell / 4.0)
        chord = abs(q - p)
        if chord < 2.0 * raster.cell:
            continue
        pieces = raster.split(p, q)
        if pieces is None:
            continue
        used += 1
        best = max(best, min(pieces) / chord)
    return best, used, raster.simply_connected()


def boundary_holder_exponent(fmap: ConformalMap) -> Tuple[float, float]:
    """
    Slope of log osc(delta) against log delta near the unit circle.

    osc(delta) is the largest |f(z e^(i delta)) - f(z)| over |z| = 1 - 2^-8.
    Returns (exponent capped at 1, r^2).
    """
    z = HOLDER_RADIUS * np.exp(2j * np.pi * np.arange(HOLDER_POINTS) / HOLDER_POINTS)
    fz = fmap.eval(z)
    osc = [float(np.max(np.abs(fmap.eval(z * np.exp(1j * d)) - fz))) for d in HOLDER_SCALES]
    fit = linregress(np.log(HOLDER_SCALES), np.log(osc))
    return min(float(fit.slope), 1.0), float(fit.rvalue**2)


def build_john_domain_from_triangles(
    triangles: Sequence[Triangle],
    probes: Optional[int] = None,
    grid: Optional[int] = None,
    seed: int = 0,
) -> JohnDomainReport:
    """
    Probe the disk minus the given triangles.

    Raises:
        GeometryError: radius outside (0, 1/2) or triangles covering the circle
    """
    cfg = section("sieve")
    probes = int(cfg.get("john_probes", JOHN_PROBES) if probes is None else probes)
    grid = int(cfg.get("john_grid", JOHN_GRID) if grid is None else grid)
    if probes < 1 or grid < 16:
        raise ParameterError(f"need probes >= 1 and grid >= 16, got {probes}, {grid}")

    domain = PuncturedDisk(triangles)
    M, used, simple = probe_john_constant(domain, probes, grid, seed)
    if domain.triangles:
        fmap = build_boundary_map(domain.polygon(), center=0.0)
    else:
        fmap = IdentityMap()
    alpha, r2 = boundary_holder_exponent(fmap)
    logger.info(f"Punctured disk with {len(domain.triangles)} triangles: M~{M:.3f}, alpha~{alpha:.3f} ({used} probes)")
    return JohnDomainReport(
        triangles=list(domain.triangles),
        john_constant_estimate=M,
        holder_exponent_estimate=alpha,
        probes=used,
        simply_connected=simple,
        holder_r_squared=r2,
    )


def sieve_triangles(sieve: SieveResult, factor: Optional[float] = None) -> List[Triangle]:
    """
    Triangles T(x, r) for the boundary-centred cover discs B(x, rho) of the bad squares.

    Uses r = rho/2, not the cover radius, so that T(x, r) lies inside B(x, rho).
    """
    if factor is None:
        factor = float(section("sieve").get("disc_cover_factor", DISC_COVER_FACTOR))
    return [(centre, radius / 2.0) for centre, radius in disc_cover(sieve.bad_squares, factor)]


def build_john_domain(
    sieve: SieveResult,
    factor: Optional[float] = None,
    probes: Optional[int] = None,
    grid: Optional[int] = None,
    seed: int = 0,
) -> JohnDomainReport:
    """Punctured disk built from a sieve's bad squares."""
    return build_john_domain_from_triangles(sieve_triangles(sieve, factor), probes=probes, grid=grid, seed=seed)
