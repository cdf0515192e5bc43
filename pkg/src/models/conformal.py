"""Data models for the conformal engine."""

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

# Endpoints closer than this (relative) are treated as the same vertex
CLOSE_TOL = 1e-12


class SourceDomain(Enum):
    """Domain a conformal map is defined on."""

    DISK = "disk"
    HALF_PLANE = "half_plane"


class MapKind(Enum):
    """Closed-form and numerically constructed map families."""

    IDENTITY = "identity"
    MOBIUS = "mobius"
    KOEBE = "koebe"
    SLIT = "slit"  # radial slit, disk -> disk minus a radial segment
    CHORDAL_SLIT = "chordal_slit"
    CAYLEY = "cayley"
    COMPOSED = "composed"
    BOUNDARY_FITTED = "boundary_fitted"


@dataclass
class JordanCurve:
    """Closed polyline; the last vertex repeats the first."""

    vertices: np.ndarray
    depth: Optional[int] = None
    flatness: Optional[float] = None

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=complex)
        if len(v) > 1 and abs(v[-1] - v[0]) <= CLOSE_TOL * max(1.0, float(np.max(np.abs(v)))):
            v = v.copy()
            v[-1] = v[0]
        elif len(v) and v[0] != v[-1]:
            v = np.append(v, v[0])
        self.vertices = v

    @property
    def n_segments(self) -> int:
        return max(len(self.vertices) - 1, 0)

    @property
    def edges(self) -> np.ndarray:
        """Segment vectors."""
        return np.diff(self.vertices)

    @property
    def max_spacing(self) -> float:
        return float(np.max(np.abs(self.edges))) if self.n_segments else 0.0

    @property
    def length(self) -> float:
        return float(np.sum(np.abs(self.edges)))

    @property
    def signed_area(self) -> float:
        """Shoelace area, positive for counter-clockwise curves."""
        z = self.vertices
        return 0.5 * float(np.sum(z[:-1].real * z[1:].imag - z[1:].real * z[:-1].imag))

    @property
    def centroid(self) -> complex:
        """Area centroid of the enclosed region."""
        z = self.vertices
        cross = z[:-1].real * z[1:].imag - z[1:].real * z[:-1].imag
        area = 0.5 * np.sum(cross)
        cx = np.sum((z[:-1].real + z[1:].real) * cross) / (6.0 * area)
        cy = np.sum((z[:-1].imag + z[1:].imag) * cross) / (6.0 * area)
        return complex(cx, cy)

    def to_dict(self) -> dict:
        return {
            "depth": self.depth,
            "flatness": self.flatness,
            "vertices": [[float(p.real), float(p.imag)] for p in self.vertices[:-1]],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "JordanCurve":
        """Create JordanCurve from dictionary data."""
        vertices = np.array([complex(x, y) for x, y in data.get("vertices", [])], dtype=complex)
        return cls(vertices=vertices, depth=data.get("depth"), flatness=data.get("flatness"))
