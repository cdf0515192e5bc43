"""Data models for dyadic-square sieves."""

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Tuple


class SieveMode(Enum):
    """Weight integrated over each square."""

    BOUNDED = "bounded"  # |f'|^2 over the inner half T(Q)
    UNBOUNDED = "unbounded"  # |f' / max(|f| log|f|, 1)|^2 over T(Q)
    REFINED = "refined"  # |f'|^t along the inner segment L(Q)


@dataclass(frozen=True, order=True)
class DyadicSquare:
    """Polar square Q_{n,k} = {1 - 2^-n <= r < 1, k/2^n <= angle/2pi <= (k+1)/2^n}."""

    n: int
    k: int

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.k < 2**self.n:
            raise ValueError(f"invalid dyadic square ({self.n}, {self.k})")

    @property
    def side(self) -> float:
        """l(Q) = 2^-n."""
        return 2.0 ** (-self.n)

    @property
    def r_inner(self) -> float:
        return 1.0 - 2.0 ** (-self.n)

    @property
    def r_middle(self) -> float:
        """Outer radius of the inner half T(Q)."""
        return 1.0 - 2.0 ** (-(self.n + 1))

    @property
    def angles(self) -> Tuple[float, float]:
        scale = 2.0 * math.pi / 2**self.n
        return self.k * scale, (self.k + 1) * scale

    @property
    def boundary_center(self) -> complex:
        """Point of the unit circle above the middle of the square."""
        return cmath.exp(2j * math.pi * (self.k + 0.5) / 2**self.n)

    def inner_half_area(self) -> float:
        a0, a1 = self.angles
        return 0.5 * (self.r_middle**2 - self.r_inner**2) * (a1 - a0)

    def inner_segment_length(self) -> float:
        a0, a1 = self.angles
        return self.r_inner * (a1 - a0)

    def to_list(self) -> List[int]:
        return [self.n, self.k]


@dataclass
class SieveResult:
    """Bad squares of one sieve run and their content bound."""

    mode: SieveMode
    p: float
    N: int
    n_max: int
    bad_squares: List[DyadicSquare] = field(default_factory=list)
    content_bound: float = 0.0
    quadrature_order: int = 16
    # weight integral of each bad square, same order as bad_squares
    bad_weights: List[float] = field(default_factory=list)
    delta: Optional[float] = None
    t: Optional[float] = None
    squares_scanned: int = 0
    map_descriptor: Optional[dict] = None

    def __post_init__(self):
        self._index: Optional[Dict[int, set]] = None

    @property
    def bad_by_generation(self) -> Dict[int, List[int]]:
        out: Dict[int, List[int]] = {}
        for sq in self.bad_squares:
            out.setdefault(sq.n, []).append(sq.k)
        return out

    def is_bad(self, n: int, k: int) -> bool:
        if self._index is None:
            self._index = {n_: set(ks) for n_, ks in self.bad_by_generation.items()}
        return k in self._index.get(n, ())

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "p": self.p,
            "N": self.N,
            "n_max": self.n_max,
            "delta": self.delta,
            "t": self.t,
            "bad": [sq.to_list() for sq in self.bad_squares],
            "bad_weights": list(self.bad_weights),
            "content_bound": self.content_bound,
            "quadrature_order": self.quadrature_order,
            "squares_scanned": self.squares_scanned,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SieveResult":
        """Create SieveResult from dictionary data."""
        return cls(
            mode=SieveMode(data.get("mode", "bounded")),
            p=float(data["p"]),
            N=int(data["N"]),
            n_max=int(data.get("n_max", data["N"])),
            bad_squares=[DyadicSquare(int(n), int(k)) for n, k in data.get("bad", [])],
            content_bound=float(data.get("content_bound", 0.0)),
            quadrature_order=int(data.get("quadrature_order", 16)),
            bad_weights=[float(w) for w in data.get("bad_weights", [])],
            delta=data.get("delta"),
            t=data.get("t"),
            squares_scanned=int(data.get("squares_scanned", 0)),
        )


@dataclass
class HolderReport:
    """Empirical Holder constant over sampled pairs of the good set."""

    exponent: float
    constant: float
    pairs: int
    worst_pair: Tuple[complex, complex]
    # fraction of pairs whose radial-circular-radial path stays in the good set
    path_in_domain: float = 1.0
    local_constant: float = 0.0
    global_constant: float = 0.0

    def to_dict(self) -> dict:
        z, w = self.worst_pair
        return {
            "exponent": self.exponent,
            "constant": self.constant,
            "pairs": self.pairs,
            "worst_pair": [[z.real, z.imag], [w.real, w.imag]],
            "path_in_domain": self.path_in_domain,
            "local_constant": self.local_constant,
            "global_constant": self.global_constant,
        }


@dataclass
class ChainReport:
    """Three sides of sum l(Q)^p <= sum of weight integrals <= area of the image annulus."""

    content: float
    weight_sum: float
    annulus_area: float
    tolerance: float = 1e-3

    @property
    def lower_ok(self) -> bool:
        return self.content <= self.weight_sum * (1.0 + self.tolerance)

    @property
    def upper_ok(self) -> bool:
        return self.weight_sum <= self.annulus_area * (1.0 + self.tolerance)

    def to_dict(self) -> dict:
        return {
            "content": self.content,
            "weight_sum": self.weight_sum,
            "annulus_area": self.annulus_area,
            "lower_ok": self.lower_ok,
            "upper_ok": self.upper_ok,
        }


@dataclass
class RefinedBudget:
    """Per-generation refined bound terms against the bad-set content."""

    generations: List[int]
    terms: List[float]
    content: List[float]
    tolerance: float = 1e-3

    @property
    def term_ok(self) -> List[bool]:
        return [c <= t * (1.0 + self.tolerance) for c, t in zip(self.content, self.terms)]

    @property
    def total_term(self) -> float:
        return math.fsum(self.terms)

    def to_dict(self) -> dict:
        return {
            "generations": self.generations,
            "terms": self.terms,
            "content": self.content,
            "term_ok": self.term_ok,
        }


@dataclass
class JohnDomainReport:
    """Triangle-punctured disk and its probed John and Holder constants."""

    triangles: List[Tuple[complex, float]]
    john_constant_estimate: float
    holder_exponent_estimate: float
    probes: int = 0
    simply_connected: bool = True
    holder_r_squared: float = 1.0

    def to_dict(self) -> dict:
        return {
            "triangles": [[c.real, c.imag, r] for c, r in self.triangles],
            "john_constant_estimate": self.john_constant_estimate,
            "holder_exponent_estimate": self.holder_exponent_estimate,
            "probes": self.probes,
            "simply_connected": self.simply_connected,
            "holder_r_squared": self.holder_r_squared,
        }
