"""Data models for Loewner evolutions."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np


class TraceKind(Enum):
    """Geometry a trace lives in."""

    CHORDAL = "chordal"  # upper half plane, from 0 to infinity
    RADIAL = "radial"  # unit disk, from the boundary to 0
    DISK_CHORDAL = "disk_chordal"  # unit disk, from 1 to -1
    IMAGE = "image"  # pushed forward by a conformal map


@dataclass
class DrivingFunction:
    """Sampled driving process on a uniform capacity-time grid."""

    times: np.ndarray
    values: np.ndarray
    kappa: float
    seed: int
    kind: TraceKind = TraceKind.CHORDAL

    @property
    def horizon(self) -> float:
        return float(self.times[-1])

    @property
    def n_steps(self) -> int:
        return len(self.times) - 1

    @property
    def dt(self) -> float:
        return self.horizon / self.n_steps

    @property
    def initial(self) -> float:
        return float(self.values[0])

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "kappa": self.kappa,
            "seed": self.seed,
            "horizon": self.horizon,
            "n_steps": self.n_steps,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DrivingFunction":
        """Create DrivingFunction from dictionary data (times and values as lists)."""
        return cls(
            times=np.asarray(data["times"], dtype=float),
            values=np.asarray(data["values"], dtype=float),
            kappa=float(data.get("kappa", 0.0)),
            seed=int(data.get("seed", 0)),
            kind=TraceKind(data.get("kind", "chordal")),
        )


@dataclass
class Trace:
    """Time-stamped polyline approximation of a Loewner trace."""

    times: np.ndarray
    points: np.ndarray
    kind: TraceKind
    # True where a point was pulled back from the boundary before mapping
    flags: Optional[np.ndarray] = None
    kappa: Optional[float] = None
    seed: Optional[int] = None
    dt: Optional[float] = None

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.points = np.asarray(self.points, dtype=complex)
        if self.flags is None:
            self.flags = np.zeros(len(self.points), dtype=bool)
        else:
            self.flags = np.asarray(self.flags, dtype=bool)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def approximate_count(self) -> int:
        return int(np.count_nonzero(self.flags))


@dataclass
class TraceBatch:
    """Many traces sharing one evaluation grid (rows are traces)."""

    times: np.ndarray
    points: np.ndarray
    kind: TraceKind
    kappa: float
    seed: int
    n_steps: int
    dt: float
    seeds: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.uint64))

    @property
    def n_traces(self) -> int:
        return self.points.shape[0]

    def trace(self, index: int) -> Trace:
        """Single row as a Trace."""
        return Trace(
            times=self.times,
            points=self.points[index],
            kind=self.kind,
            kappa=self.kappa,
            seed=int(self.seeds[index]) if len(self.seeds) else None,
            dt=self.dt,
        )
