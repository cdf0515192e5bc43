"""Evaluable conformal maps with derivatives and JSON descriptors."""

import cmath
import math
from abc import ABC, abstractmethod
from typing import Any, Callable, Dict, Type

import numpy as np

from const import NEAR_BOUNDARY_TOL
from errors import DomainError, ParameterError
from loewner.slit_maps import (
    chordal_slit_inverse,
    chordal_slit_inverse_deriv,
    koebe,
    koebe_deriv,
    radial_slit_inverse,
    radial_slit_inverse_deriv,
    radial_tip_radius,
)
from models.conformal import JordanCurve, MapKind, SourceDomain
from utils.logger import get_logger

logger = get_logger("conformal")


def _as_array(z):
    arr = np.asarray(z, dtype=complex)
    return arr, arr.ndim == 0


def _segment_distance(w: np.ndarray, a: complex, b: complex) -> np.ndarray:
    """Distance from points ``w`` to the segment [a, b]."""
    d = b - a
    length2 = abs(d) ** 2
    if length2 == 0:
        return np.abs(w - a)
    s = np.clip(((w - a) * np.conj(d)).real / length2, 0.0, 1.0)
    return np.abs(w - (a + s * d))


class ConformalMap(ABC):
    """
    Base class for univalent maps f from the disk (or half plane) onto a domain G.

    Subclasses implement the raw formulas ``_eval``/``_deriv``; the public
    ``eval``/``deriv`` validate that points lie inside the source domain.
    """

    kind: MapKind
    source: SourceDomain = SourceDomain.DISK
    # True when the closed form extends continuously to the source boundary
    boundary_continuous: bool = False
    # Metadata flag: bounded image (the bounded-function integral means spectrum)
    bounded_image: bool = True

    @abstractmethod
    def _eval(self, z: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def _deriv(self, z: np.ndarray) -> np.ndarray:
        pass

    @abstractmethod
    def params(self) -> Dict[str, Any]:
        """Kind-specific parameters for the JSON descriptor."""
        pass

    def boundary_distance(self, w) -> np.ndarray:
        """Distance from image points ``w`` to the boundary of the image domain."""
        raise NotImplementedError(f"{self.kind.value} map has no boundary distance")

    def _check(self, z: np.ndarray) -> None:
        if z.size == 0:
            return
        if self.source == SourceDomain.DISK:
            modulus = np.abs(z)
            worst = float(np.max(modulus))
            if not np.all(modulus < 1.0):
                raise DomainError(f"Point outside the unit disk (|z| = {worst:.17g})", max_modulus=worst)
            if worst > 1.0 - NEAR_BOUNDARY_TOL:
                logger.warning(f"{self.kind.value}: evaluating within {NEAR_BOUNDARY_TOL:g} of the unit circle")
        else:
            lowest = float(np.min(z.imag))
            if not np.all(z.imag > 0):
                raise DomainError(f"Point outside the upper half plane (Im z = {lowest:.17g})", min_imag=lowest)
            if lowest < NEAR_BOUNDARY_TOL:
                logger.warning(f"{self.kind.value}: evaluating within {NEAR_BOUNDARY_TOL:g} of the real line")

    def eval(self, z):
        """Evaluate f at interior points (scalar or array)."""
        arr, scalar = _as_array(z)
        self._check(arr)
        out = self._eval(arr) if arr.size else arr.copy()
        return complex(out) if scalar else out

    def deriv(self, z):
        """Evaluate f' at interior points (scalar or array)."""
        arr, scalar = _as_array(z)
        self._check(arr)
        out = self._deriv(arr) if arr.size else arr.copy()
        return complex(out) if scalar else out

    def eval_closure(self, z):
        """Evaluate the continuous extension on the closed source domain."""
        if not self.boundary_continuous:
            raise DomainError(f"{self.kind.value} map does not extend continuously to the boundary")
        arr, scalar = _as_array(z)
        out = self._eval(arr) if arr.size else arr.copy()
        return complex(out) if scalar else out

    def __call__(self, z):
        return self.eval(z)

    def compose(self, inner: "ConformalMap") -> "ComposedMap":
        """Map z -> self(inner(z))."""
        return ComposedMap(self, inner)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "source": self.source.value, **self.params()}

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.params()})"


class IdentityMap(ConformalMap):
    """f(z) = z on the disk or the half plane."""

    kind = MapKind.IDENTITY
    boundary_continuous = True

    def __init__(self, source: SourceDomain = SourceDomain.DISK):
        self.source = SourceDomain(source)
        self.bounded_image = self.source == SourceDomain.DISK

    def _eval(self, z):
        return z.copy()

    def _deriv(self, z):
        return np.ones_like(z)

    def params(self):
        return {}

    def boundary_distance(self, w):
        w = np.asarray(w, dtype=complex)
        if self.source == SourceDomain.DISK:
            return 1.0 - np.abs(w)
        return w.imag


class MobiusMap(ConformalMap):
    """Disk automorphism f(z) = exp(i*theta) * (z - a) / (1 - conj(a) * z)."""

    kind = MapKind.MOBIUS
    boundary_continuous = True

    def __init__(self, a: complex = 0.0, theta: float = 0.0):
        a = complex(a)
        if not abs(a) < 1:
            raise ParameterError(f"Mobius parameter must satisfy |a| < 1, got {a}", a=a)
        self.a = a
        self.theta = float(theta)
        self._rot = cmath.exp(1j * self.theta)

    def _eval(self, z):
        return self._rot * (z - self.a) / (1.0 - self.a.conjugate() * z)

    def _deriv(self, z):
        return self._rot * (1.0 - abs(self.a) ** 2) / (1.0 - self.a.conjugate() * z) ** 2

    def inverse(self) -> "MobiusMap":
        return MobiusMap(a=-self.a * self._rot, theta=-self.theta)

    def max_derivative(self) -> float:
        """Supremum of |f'| over the closed disk."""
        r = abs(self.a)
        return (1.0 + r) / (1.0 - r)

    def params(self):
        return {"a": [self.a.real, self.a.imag], "theta": self.theta}

    def boundary_distance(self, w):
        return 1.0 - np.abs(np.asarray(w, dtype=complex))


class KoebeMap(ConformalMap):
    """Koebe function k(z) = z / (1 - z)^2 onto C minus (-inf, -1/4]."""

    kind = MapKind.KOEBE
    bounded_image = False

    def _eval(self, z):
        return koebe(z)

    def _deriv(self, z):
        return koebe_deriv(z)

    def params(self):
        return {}

    def boundary_distance(self, w):
        w = np.asarray(w, dtype=complex)
        return np.where(w.real <= -0.25, np.abs(w.imag), np.abs(w + 0.25))


class RadialSlitMap(ConformalMap):
    """Disk onto the disk minus a radial slit from exp(i*theta), fixing 0."""

    kind = MapKind.SLIT

    def __init__(self, theta: float = 0.0, capacity: float = 0.1):
        if not capacity > 0:
            raise ParameterError(f"slit capacity must be > 0, got {capacity}", capacity=capacity)
        self.theta = float(theta)
        self.capacity = float(capacity)
        self.tip = cmath.exp(1j * self.theta) * float(radial_tip_radius(self.capacity))

    def _eval(self, z):
        return radial_slit_inverse(z, self.theta, self.capacity)

    def _deriv(self, z):
        return radial_slit_inverse_deriv(z, self.theta, self.capacity)

    def params(self):
        return {"theta": self.theta, "capacity": self.capacity}

    def boundary_distance(self, w):
        w = np.asarray(w, dtype=complex)
        base = cmath.exp(1j * self.theta)
        return np.minimum(1.0 - np.abs(w), _segment_distance(w, self.tip, base))


class ChordalSlitMap(ConformalMap):
    """Upper half plane onto H minus the vertical slit [u, u + 2i*sqrt(capacity)]."""

    kind = MapKind.CHORDAL_SLIT
    source = SourceDomain.HALF_PLANE
    bounded_image = False

    def __init__(self, u: float = 0.0, capacity: float = 0.25):
        if not capacity > 0:
            raise ParameterError(f"slit capacity must be > 0, got {capacity}", capacity=capacity)
        self.u = float(u)
        self.capacity = float(capacity)
        self.tip = complex(self.u, 2.0 * math.sqrt(self.capacity))

    def _eval(self, z):
        return chordal_slit_inverse(z, self.u, self.capacity)

    def _deriv(self, z):
        return chordal_slit_inverse_deriv(z, self.u, self.capacity)

    def params(self):
        return {"u": self.u, "capacity": self.capacity}

    def boundary_distance(self, w):
        w = np.asarray(w, dtype=complex)
        return np.minimum(w.imag, _segment_distance(w, complex(self.u, 0.0), self.tip))


class CayleyMap(ConformalMap):
    """Upper half plane onto the disk, f(z) = exp(i*rotation) * (z - i) / (z + i)."""

    kind = MapKind.CAYLEY
    source = SourceDomain.HALF_PLANE
    boundary_continuous = True

    def __init__(self, rotation: float = 0.0):
        self.rotation = float(rotation)
        self._rot = cmath.exp(1j * self.rotation)

    def _eval(self, z):
        return self._rot * (z - 1j) / (z + 1j)

    def _deriv(self, z):
        return self._rot * 2j / (z + 1j) ** 2

    def params(self):
        return {"rotation": self.rotation}

    def boundary_distance(self, w):
        return 1.0 - np.abs(np.asarray(w, dtype=complex))


class ComposedMap(ConformalMap):
    """z -> outer(inner(z)); derivatives by the chain rule."""

    kind = MapKind.COMPOSED

    def __init__(self, outer: ConformalMap, inner: ConformalMap):
        self.outer = outer
        self.inner = inner
        self.source = inner.source
        self.boundary_continuous = outer.boundary_continuous and inner.boundary_continuous
        self.bounded_image = outer.bounded_image

    def _eval(self, z):
        return self.outer.eval(self.inner._eval(z))

    def _deriv(self, z):
        w = self.inner._eval(z)
        return self.outer.deriv(w) * self.inner._deriv(z)

    def eval_closure(self, z):
        if not self.boundary_continuous:
            return super().eval_closure(z)
        return self.outer.eval_closure(self.inner.eval_closure(z))

    def params(self):
        return {"outer": self.outer.to_dict(), "inner": self.inner.to_dict()}

    def boundary_distance(self, w):
        return self.outer.boundary_distance(w)


MAP_REGISTRY: Dict[str, Type[ConformalMap]] = {
    MapKind.IDENTITY.value: IdentityMap,
    MapKind.MOBIUS.value: MobiusMap,
    MapKind.KOEBE.value: KoebeMap,
    MapKind.SLIT.value: RadialSlitMap,
    MapKind.CHORDAL_SLIT.value: ChordalSlitMap,
    MapKind.CAYLEY.value: CayleyMap,
    MapKind.COMPOSED.value: ComposedMap,
}

# Loaders for kinds whose descriptors need more than keyword parameters
_LOADERS: Dict[str, Callable[[Dict[str, Any]], ConformalMap]] = {}


def register_loader(kind: MapKind, loader: Callable[[Dict[str, Any]], ConformalMap]) -> None:
    _LOADERS[kind.value] = loader


def _complex_param(value) -> complex:
    if isinstance(value, (list, tuple)):
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def map_from_dict(data: Dict[str, Any]) -> ConformalMap:
    """
    Rebuild a map from its JSON descriptor.

    Raises:
        ParameterError: unknown kind or malformed parameters
    """
    kind = str(data.get("kind", "")).replace("-", "_").lower()
    if kind == "möbius":
        kind = MapKind.MOBIUS.value
    if kind in _LOADERS:
        return _LOADERS[kind](data)
    if kind not in MAP_REGISTRY:
        raise ParameterError(f"Unknown map kind: {data.get('kind')!r}", kind=data.get("kind"))

    try:
        if kind == MapKind.IDENTITY.value:
            return IdentityMap(SourceDomain(data.get("source", "disk")))
        if kind == MapKind.MOBIUS.value:
            return MobiusMap(a=_complex_param(data.get("a", 0.0)), theta=float(data.get("theta", 0.0)))
        if kind == MapKind.KOEBE.value:
            return KoebeMap()
        if kind == MapKind.SLIT.value:
            return RadialSlitMap(theta=float(data.get("theta", 0.0)), capacity=float(data.get("capacity", 0.1)))
        if kind == MapKind.CHORDAL_SLIT.value:
            return ChordalSlitMap(u=float(data.get("u", 0.0)), capacity=float(data.get("capacity", 0.25)))
        if kind == MapKind.CAYLEY.value:
            return CayleyMap(rotation=float(data.get("rotation", 0.0)))
        return ComposedMap(map_from_dict(data["outer"]), map_from_dict(data["inner"]))
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, ParameterError):
            raise
        raise ParameterError(f"Malformed {kind} map descriptor: {e}", kind=kind) from e


def image_curve(fmap: ConformalMap, radius: float = 0.999, n: int = 1024) -> JordanCurve:
    """Closed polyline f(radius * exp(i*s)) for a disk map."""
    if fmap.source != SourceDomain.DISK:
        raise ParameterError("image_curve needs a map defined on the disk")
    if not 0 < radius < 1:
        raise ParameterError(f"radius must lie in (0, 1), got {radius}", radius=radius)
    s = 2.0 * np.pi * np.arange(n) / n
    return JordanCurve(vertices=fmap.eval(radius * np.exp(1j * s)))


def winding_number(curve: JordanCurve, point: complex) -> int:
    """Winding number of a closed polyline around ``point``."""
    d = curve.vertices - point
    if np.any(d == 0):
        raise DomainError("point lies on the curve")
    turns = np.angle(d[1:] / d[:-1])
    return int(round(float(np.sum(turns)) / (2.0 * np.pi)))
