"""Data models for integral means spectra and dimension bounds."""

from dataclasses import dataclass, field
from typing import Dict, List, Optional


@dataclass
class IntegralMeans:
    """Circle integrals of |f'|^t at several radii."""

    t: float
    radii: List[float]
    means: List[float]
    points: List[int] = field(default_factory=list)
    # radii where halving the point count moved the value by more than 1%
    precision_warnings: List[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "radii": list(self.radii),
            "means": list(self.means),
            "points": list(self.points),
            "precision_warnings": list(self.precision_warnings),
        }


@dataclass
class SpectrumEstimate:
    """Regression estimate of the integral means spectrum at one exponent."""

    t: float
    radii: List[float]
    means: List[float]
    beta_hat: float
    r_squared: float
    intercept: float = 0.0
    stderr: float = 0.0
    low_confidence: bool = False
    precision_warnings: List[float] = field(default_factory=list)
    bounded_image: Optional[bool] = None

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "beta_hat": self.beta_hat,
            "r_squared": self.r_squared,
            "intercept": self.intercept,
            "stderr": self.stderr,
            "low_confidence": self.low_confidence,
            "precision_warnings": list(self.precision_warnings),
            "bounded_image": self.bounded_image,
        }

    def table(self) -> List[List[float]]:
        """(radius, mean) rows for the CSV table."""
        return [[r, m] for r, m in zip(self.radii, self.means)]

    @classmethod
    def from_dict(cls, data: dict) -> "SpectrumEstimate":
        return cls(
            t=float(data["t"]),
            radii=[float(r) for r in data.get("radii", [])],
            means=[float(m) for m in data.get("means", [])],
            beta_hat=float(data["beta_hat"]),
            r_squared=float(data["r_squared"]),
            intercept=float(data.get("intercept", 0.0)),
            stderr=float(data.get("stderr", 0.0)),
            low_confidence=bool(data.get("low_confidence", False)),
            precision_warnings=[float(r) for r in data.get("precision_warnings", [])],
            bounded_image=data.get("bounded_image"),
        )


@dataclass
class BoundCheck:
    """Margin of an estimate against the universal bound 4 t^2."""

    t: float
    beta_hat: float
    bound: float
    margin: float
    tolerance: float
    passed: bool
    low_confidence: bool = False

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "beta_hat": self.beta_hat,
            "bound": self.bound,
            "margin": self.margin,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "low_confidence": self.low_confidence,
        }


@dataclass
class JohnDimension:
    """Root of beta(d) = d - (2 - 8/kappa) on the admissible bracket."""

    kappa: float
    d: float
    flat_value: float
    solved: bool = True
    monotone: bool = True
    evaluations: int = 0
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "d": self.d,
            "flat_value": self.flat_value,
            "solved": self.solved,
            "monotone": self.monotone,
            "evaluations": self.evaluations,
            "note": self.note,
        }


@dataclass
class CoveringSum:
    """Per-generation terms of the expected content bound."""

    t: float
    kappa: float
    generations: List[int]
    terms: List[float]
    partial_sums: List[float]
    beta_hat: float
    convergent: bool

    @property
    def exponent_gap(self) -> float:
        """t - (2 - 8/kappa) - beta_hat; positive means geometric decay."""
        return self.t - (2.0 - 8.0 / self.kappa) - self.beta_hat

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "kappa": self.kappa,
            "generations": list(self.generations),
            "terms": list(self.terms),
            "partial_sums": list(self.partial_sums),
            "beta_hat": self.beta_hat,
            "convergent": self.convergent,
        }


@dataclass
class DimensionBound:
    """Branches of the upper bound on the dimension of trace-boundary intersections."""

    kappa: float
    p: float
    a: float
    branch_refined: Optional[float]
    refined_applicable: bool
    branch_symbolic: Dict[str, float]
    branch_john: Optional[float] = None
    c1: float = 0.0
    c2: Optional[float] = None
    combined: float = 2.0

    def to_dict(self) -> dict:
        return {
            "kappa": self.kappa,
            "p": self.p,
            "a": self.a,
            "branch_refined": self.branch_refined,
            "refined_applicable": self.refined_applicable,
            "branch_symbolic": dict(self.branch_symbolic),
            "branch_john": self.branch_john,
            "C1": self.c1,
            "C2": self.c2,
            "combined": self.combined,
        }
