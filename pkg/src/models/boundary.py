"""Data models for Monte Carlo boundary statistics."""

import math
from dataclasses import dataclass, field
from typing import List, Optional


@dataclass
class BoxCount:
    """Box counts per scale and the fitted slope of log N against log 1/scale."""

    scales: List[float]
    counts: List[float]
    slope: float
    r_squared: float
    intercept: float = 0.0
    stderr: float = 0.0

    def to_dict(self) -> dict:
        return {
            "scales": list(self.scales),
            "counts": list(self.counts),
            "slope": self.slope,
            "r_squared": self.r_squared,
            "intercept": self.intercept,
            "stderr": self.stderr,
        }

    def table(self) -> List[List[float]]:
        return [[s, c] for s, c in zip(self.scales, self.counts)]


@dataclass
class HittingEstimate:
    """Fraction of traces meeting a boundary disc."""

    radius: float
    hits: int
    n_traces: int

    @property
    def estimate(self) -> float:
        return self.hits / self.n_traces if self.n_traces else 0.0

    @property
    def stderr(self) -> float:
        """Binomial standard error."""
        if not self.n_traces:
            return 0.0
        q = self.estimate
        return math.sqrt(q * (1.0 - q) / self.n_traces)

    def to_dict(self) -> dict:
        return {"radius": self.radius, "hits": self.hits, "n_traces": self.n_traces, "estimate": self.estimate}


@dataclass
class HittingExperiment:
    """Hit counts of one trace set against discs B(exp(i t), r) for several radii."""

    kappa: float
    center_angle: float
    delta: float
    radii: List[float]
    n_traces: int
    hits_per_radius: List[int] = field(default_factory=list)
    seed: int = 0
    n_steps: int = 0
    horizon: float = 0.0
    exponent: Optional[float] = None
    exponent_r_squared: Optional[float] = None
    truncated: bool = False

    @property
    def predicted_exponent(self) -> float:
        """8/kappa - 1."""
        return 8.0 / self.kappa - 1.0

    def estimates(self) -> List[HittingEstimate]:
        return [HittingEstimate(r, h, self.n_traces) for r, h in zip(self.radii, self.hits_per_radius)]

    def table(self) -> List[List[float]]:
        return [[e.radius, e.estimate, e.stderr] for e in self.estimates()]

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "center_angle": self.center_angle,
            "delta": self.delta,
            "radii": list(self.radii),
            "n_traces": self.n_traces,
            "hits_per_radius": list(self.hits_per_radius),
            "seed": self.seed,
            "n_steps": self.n_steps,
            "horizon": self.horizon,
            "exponent": self.exponent,
            "exponent_r_squared": self.exponent_r_squared,
            "predicted_exponent": self.predicted_exponent,
            "truncated": self.truncated,
        }


@dataclass
class RatioTest:
    """Ratio of hitting estimates at two radii against (r1/r2)^(8/kappa - 1)."""

    ratio: float
    expected: float
    stderr: float

    @property
    def z_score(self) -> float:
        return (self.ratio - self.expected) / self.stderr if self.stderr > 0 else math.inf

    def within(self, sigmas: float = 3.0) -> bool:
        return abs(self.ratio - self.expected) <= sigmas * self.stderr

    def to_dict(self) -> dict:
        return {"ratio": self.ratio, "expected": self.expected, "stderr": self.stderr}


@dataclass
class DimensionReport:
    """Box-counting slope of trace points near a boundary."""

    kappa: float
    n_traces: int
    box: Optional[BoxCount]
    expected: Optional[float] = None
    degenerate: bool = False
    note: str = ""
    seed: int = 0
    n_steps: int = 0
    truncated: bool = False

    @property
    def slope(self) -> Optional[float]:
        return self.box.slope if self.box is not None else None

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "n_traces": self.n_traces,
            "box": self.box.to_dict() if self.box is not None else None,
            "expected": self.expected,
            "degenerate": self.degenerate,
            "note": self.note,
            "seed": self.seed,
            "n_steps": self.n_steps,
            "truncated": self.truncated,
        }


@dataclass
class FrostmanMeasure:
    """Weighted atoms in [1, 2]."""

    name: str
    atoms: List[float]
    weights: List[float]
    dimension: float

    @property
    def total_mass(self) -> float:
        return math.fsum(self.weights)

    def to_dict(self) -> dict:
        return {"name": self.name, "atoms": len(self.atoms), "mass": self.total_mass, "dimension": self.dimension}


@dataclass
class FrostmanExperiment:
    """Moments of mu(C_eps) over traces, C_eps the points of [1, 2] within eps of the trace."""

    a: float
    measure: FrostmanMeasure
    eps_list: List[float]
    first_moments: List[float] = field(default_factory=list)
    second_moments: List[float] = field(default_factory=list)
    energy: float = 0.0
    n_traces: int = 0
    feasible: Optional[bool] = None
    insufficient: bool = False
    truncated: bool = False

    @property
    def measure_atoms(self) -> List[float]:
        return self.measure.atoms

    @property
    def ratios(self) -> List[float]:
        return [s / (f * f) if f > 0 else math.nan for f, s in zip(self.first_moments, self.second_moments)]

    @property
    def cauchy_schwarz_ok(self) -> bool:
        """E[mu^2] >= E[mu]^2 at every eps (up to rounding)."""
        return all(s >= f * f * (1.0 - 1e-12) for f, s in zip(self.first_moments, self.second_moments))

    @property
    def ratio_spread(self) -> float:
        """max/min of the moment ratio across eps."""
        finite = [r for r in self.ratios if math.isfinite(r)]
        return max(finite) / min(finite) if finite else math.nan

    def table(self) -> List[List[float]]:
        return [[e, f, s, r] for e, f, s, r in zip(self.eps_list, self.first_moments, self.second_moments, self.ratios)]

    def to_dict(self) -> dict:
        return {
            "a": self.a,
            "measure": self.measure.to_dict(),
            "eps": list(self.eps_list),
            "first_moments": list(self.first_moments),
            "second_moments": list(self.second_moments),
            "ratios": self.ratios,
            "energy": self.energy,
            "n_traces": self.n_traces,
            "feasible": self.feasible,
            "insufficient": self.insufficient,
            "cauchy_schwarz_ok": self.cauchy_schwarz_ok,
            "truncated": self.truncated,
        }


@dataclass
class TwoSidedReport:
    """Frequency with which the boundary sets of two independent traces come within eta."""

    kappa: float
    n_pairs: int
    etas: List[float]
    frequencies: List[float]
    window: List[float] = field(default_factory=lambda: [0.25, 1.0])
    truncated: bool = False

    def table(self) -> List[List[float]]:
        return [[e, f] for e, f in zip(self.etas, self.frequencies)]

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "n_pairs": self.n_pairs,
            "etas": list(self.etas),
            "frequencies": list(self.frequencies),
            "window": list(self.window),
            "truncated": self.truncated,
        }
