"""Validation of experiment documents without running them."""

import math
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

from conformal.maps import map_from_dict
from const import MAX_SNOWFLAKE_DEPTH
from errors import ParameterError
from models.experiment import BUDGET_KEYS, CONFIG_KEYS, EXPERIMENT_KINDS, Diagnostic

Check = Callable[[Any], Optional[str]]

# Maps built by fitting a boundary curve instead of a closed form
CURVE_MAP_KINDS = ("snowflake", "polygon")
TRACE_KINDS = ("chordal", "radial", "disk_chordal")
SIEVE_MODES = ("bounded", "unbounded", "refined")
MEASURE_KINDS = ("lebesgue", "point_mass", "cantor")


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def interval(lo: float, hi: float, closed: Tuple[bool, bool] = (False, False), label: str = "") -> Check:
    """Number in an interval; ``label`` overrides the interval text in the message."""
    text = label or f"{'[' if closed[0] else '('}{lo:g}, {hi:g}{']' if closed[1] else ')'}"

    def check(value: Any) -> Optional[str]:
        if not _is_number(value):
            return f"expected a finite number, got {value!r}"
        above = value >= lo if closed[0] else value > lo
        below = value <= hi if closed[1] else value < hi
        return None if above and below else f"{text} required, got {value:g}"

    return check


def positive(value: Any) -> Optional[str]:
    if not _is_number(value) or not value > 0:
        return f"expected a positive number, got {value!r}"
    return None


def integer(minimum: int = 1, maximum: Optional[int] = None) -> Check:
    def check(value: Any) -> Optional[str]:
        if isinstance(value, bool) or not isinstance(value, int):
            return f"expected an integer, got {value!r}"
        if value < minimum or (maximum is not None and value > maximum):
            upper = "" if maximum is None else f" and <= {maximum}"
            return f"expected an integer >= {minimum}{upper}, got {value}"
        return None

    return check


def boolean(value: Any) -> Optional[str]:
    return None if isinstance(value, bool) else f"expected true or false, got {value!r}"


def choice(*options: str) -> Check:
    def check(value: Any) -> Optional[str]:
        return None if value in options else f"expected one of {', '.join(options)}, got {value!r}"

    return check


def number_list(item: Check = positive, length: Optional[int] = None, min_length: int = 1) -> Check:
    def check(value: Any) -> Optional[str]:
        if not isinstance(value, (list, tuple)):
            return f"expected a list, got {value!r}"
        if length is not None and len(value) != length:
            return f"expected {length} values, got {len(value)}"
        if len(value) < min_length:
            return f"expected at least {min_length} values, got {len(value)}"
        for v in value:
            problem = item(v)
            if problem:
                return problem
        return None

    return check


def number_or_list(item: Check = positive) -> Check:
    many = number_list(item)

    def check(value: Any) -> Optional[str]:
        return many(value) if isinstance(value, (list, tuple)) else item(value)

    return check


def map_descriptor(value: Any) -> Optional[str]:
    """Closed-form descriptor, or a snowflake / polygon to be fitted by the zipper."""
    if not isinstance(value, dict) or "kind" not in value:
        return f"expected a map descriptor with a 'kind', got {value!r}"
    kind = value["kind"]
    if kind == "snowflake":
        depth = value.get("depth", 3)
        problem = integer(0, MAX_SNOWFLAKE_DEPTH)(depth) or interval(0.0, 1.0)(value.get("flatness", 0.5))
        return f"snowflake {problem}" if problem else None
    if kind == "polygon":
        vertices = value.get("vertices")
        if not isinstance(vertices, list) or len(vertices) < 3:
            return "polygon needs a list of at least 3 [x, y] vertices"
        return None
    try:
        map_from_dict(value)
    except ParameterError as e:
        return str(e)
    return None


def measure_descriptor(value: Any) -> Optional[str]:
    if not isinstance(value, dict) or value.get("kind", "cantor") not in MEASURE_KINDS:
        return f"measure kind must be one of {', '.join(MEASURE_KINDS)}"
    if "stage" in value:
        return integer(0, 12)(value["stage"])
    if "x" in value:
        return interval(1.0, 2.0, (True, True))(value["x"])
    if "n_atoms" in value:
        return integer(1)(value["n_atoms"])
    return None


@dataclass(frozen=True)
class Param:
    check: Check
    required: bool = False


P_RANGE = interval(0.0, 1.0, label="p ∈ (0, 1)")
HITTING_KAPPA = interval(4.0, 8.0, label="κ ∈ (4, 8) required by the hitting-estimate preconditions")
NONNEGATIVE = interval(0.0, math.inf, (True, False), label="κ >= 0")
OPEN_KAPPA = interval(4.0, 8.0, label="κ ∈ (4, 8)")
BOUNDARY_KAPPA = interval(0.0, 8.0, (False, True), label="κ ∈ (0, 8]")
MONTE_CARLO = {
    "n_traces": Param(integer(1), required=True),
    "horizon": Param(positive),
    "n_steps": Param(integer(1)),
}
SIEVE = {
    "map": Param(map_descriptor),
    "p": Param(P_RANGE, required=True),
    "N": Param(integer(1, 30), required=True),
    "mode": Param(choice(*SIEVE_MODES)),
    "n_max": Param(integer(1, 30)),
    "quadrature_order": Param(integer(4, 64)),
}
SPECTRUM_RADII = {
    "j_min": Param(integer(1, 30)),
    "j_max": Param(integer(2, 30)),
}

KIND_PARAMS: Dict[str, Dict[str, Param]] = {
    "sieve": {
        **SIEVE,
        "chain": Param(boolean),
        "john": Param(boolean),
        "probes": Param(integer(1)),
        "grid": Param(integer(16)),
    },
    "holder": {
        **SIEVE,
        "exponent": Param(interval(0.0, 1.0, (False, True))),
        "pairs": Param(integer(1)),
        "samples": Param(integer(1)),
        "boundary_dimension": Param(interval(1.0, 2.0, (True, True))),
    },
    "spectrum": {
        "map": Param(map_descriptor),
        "t": Param(number_or_list(positive)),
        **SPECTRUM_RADII,
        "tolerance": Param(positive),
    },
    "john-dimension": {
        "map": Param(map_descriptor),
        "kappa": Param(interval(4.0, 8.0, (False, True), label="κ ∈ (4, 8]"), required=True),
        **SPECTRUM_RADII,
        "covering_t": Param(positive),
        "N": Param(integer(1, 30)),
        "n_max": Param(integer(1, 30)),
    },
    "hitting": {
        "kappa": Param(NONNEGATIVE, required=True),
        "center_angle": Param(interval(-math.pi, math.pi, (True, True), label="center angle ∈ [-π, π]")),
        "radii": Param(number_list(positive), required=True),
        "delta": Param(interval(0.0, math.pi / 2)),
        "strict": Param(boolean),
        "ratio": Param(number_list(positive, length=2)),
        **MONTE_CARLO,
    },
    "line-dimension": {
        "kappa": Param(BOUNDARY_KAPPA, required=True),
        "scales": Param(number_list(positive, min_length=2)),
        "window": Param(positive),
        **MONTE_CARLO,
    },
    "frostman": {
        "kappa": Param(OPEN_KAPPA, required=True),
        "measure": Param(measure_descriptor),
        "eps": Param(number_list(positive)),
        "a": Param(interval(0.0, 1.0)),
        **MONTE_CARLO,
    },
    "trace-boundary": {
        "map": Param(map_descriptor),
        "kappa": Param(BOUNDARY_KAPPA, required=True),
        "scales": Param(number_list(positive, min_length=2)),
        **MONTE_CARLO,
    },
    "dkappa": {
        "kappa": Param(OPEN_KAPPA, required=True),
        "c": Param(positive),
        "alpha": Param(interval(0.0, 1.0, (False, True))),
        "map": Param(map_descriptor),
    },
    "trace": {
        "kappa": Param(NONNEGATIVE, required=True),
        "horizon": Param(positive),
        "n_steps": Param(integer(1)),
        "trace_kind": Param(choice(*TRACE_KINDS)),
        "eval_points": Param(integer(2)),
    },
    "snowflake": {
        "depth": Param(integer(0, MAX_SNOWFLAKE_DEPTH), required=True),
        "flatness": Param(interval(0.0, 1.0)),
        "zipper": Param(boolean),
        "scales": Param(number_list(positive, min_length=2)),
    },
    "two-sided": {
        "kappa": Param(BOUNDARY_KAPPA, required=True),
        "etas": Param(number_list(positive)),
        "window": Param(number_list(interval(0.0, math.inf, (True, False)), length=2)),
        **MONTE_CARLO,
    },
}

BUDGET_CHECKS: Dict[str, Check] = {
    "max_traces": integer(1),
    "max_squares": integer(1),
    "max_seconds": positive,
}


def _cross_checks(kind: str, params: Dict[str, Any]) -> List[Diagnostic]:
    """Checks that involve more than one parameter."""
    out: List[Diagnostic] = []
    p = params.get("p")
    if kind in ("sieve", "holder") and params.get("mode") == "refined" and _is_number(p) and 0 < p < 1:
        if 1.0 - 6.0 * math.sqrt(1.0 - p) <= 0:
            out.append(
                Diagnostic(
                    "warning",
                    "parameters.p",
                    f"exponent 1 − 6√(1−p) ≤ 0 at p = {p:g}; refined estimate inapplicable",
                )
            )
    N, n_max = params.get("N"), params.get("n_max")
    if isinstance(N, int) and isinstance(n_max, int) and n_max < N:
        out.append(Diagnostic("error", "parameters.n_max", f"n_max must be >= N = {N}, got {n_max}"))
    j_min, j_max = params.get("j_min"), params.get("j_max")
    if isinstance(j_min, int) and isinstance(j_max, int) and j_max - j_min < 2:
        out.append(Diagnostic("error", "parameters.j_max", "the radii fit needs j_max >= j_min + 2"))

    if kind == "hitting" and params.get("strict", True):
        problem = HITTING_KAPPA(params.get("kappa")) if "kappa" in params else None
        if problem:
            out.append(Diagnostic("error", "parameters.kappa", problem))
        delta = params.get("delta", 0.5)
        t = params.get("center_angle", math.pi / 2)
        if _is_number(delta) and _is_number(t):
            if not delta < abs(math.remainder(t, 2.0 * math.pi)) < math.pi - delta:
                out.append(
                    Diagnostic("error", "parameters.center_angle", f"δ < |t| < π − δ required with δ = {delta:g}")
                )
            radii = params.get("radii")
            if isinstance(radii, list):
                for r in radii:
                    if _is_number(r) and not r < delta / 2.0:
                        out.append(
                            Diagnostic("error", "parameters.radii", f"r < δ/2 = {delta / 2:g} required, got {r:g}")
                        )
                        break
    covering_t, kappa = params.get("covering_t"), params.get("kappa")
    if kind == "john-dimension" and _is_number(covering_t) and _is_number(kappa) and kappa > 0:
        if covering_t < 2.0 - 8.0 / kappa:
            out.append(
                Diagnostic("error", "parameters.covering_t", f"covering_t ≥ 2 − 8/κ = {2.0 - 8.0 / kappa:.6g} required")
            )
    ratio = params.get("ratio")
    if kind == "hitting" and isinstance(ratio, list) and isinstance(params.get("radii"), list):
        missing = [r for r in ratio if r not in params["radii"]]
        if missing:
            out.append(Diagnostic("error", "parameters.ratio", f"ratio radii must be listed in radii: {missing}"))
    window = params.get("window")
    if kind == "two-sided" and isinstance(window, list) and len(window) == 2 and all(map(_is_number, window)):
        if not window[0] < window[1]:
            out.append(Diagnostic("error", "parameters.window", "window must satisfy lo < hi"))
    return out


def validate(document: Any) -> List[Diagnostic]:
    """
    List every problem in an experiment document.

    Errors make the document unusable; warnings flag estimates that will not
    apply. Nothing is computed.
    """
    if not isinstance(document, dict):
        return [Diagnostic("error", "<root>", "experiment document must be a mapping")]

    out: List[Diagnostic] = []
    for key in document:
        if key not in CONFIG_KEYS:
            out.append(Diagnostic("error", str(key), "unknown key"))

    kind = document.get("kind")
    if kind not in EXPERIMENT_KINDS:
        out.append(Diagnostic("error", "kind", f"expected one of {', '.join(EXPERIMENT_KINDS)}, got {kind!r}"))
        return out

    seed = document.get("seed", 0)
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        out.append(Diagnostic("error", "seed", f"expected a non-negative integer, got {seed!r}"))
    output_dir = document.get("output_dir")
    if output_dir is not None and not isinstance(output_dir, str):
        out.append(Diagnostic("error", "output_dir", f"expected a path string, got {output_dir!r}"))

    budget = document.get("budget") or {}
    if not isinstance(budget, dict):
        out.append(Diagnostic("error", "budget", "expected a mapping"))
        budget = {}
    for key, value in budget.items():
        if key not in BUDGET_KEYS:
            out.append(Diagnostic("error", f"budget.{key}", "unknown key"))
        elif value is not None:
            problem = BUDGET_CHECKS[key](value)
            if problem:
                out.append(Diagnostic("error", f"budget.{key}", problem))

    params = document.get("parameters") or {}
    if not isinstance(params, dict):
        out.append(Diagnostic("error", "parameters", "expected a mapping"))
        return out
    known = KIND_PARAMS[kind]
    for key, value in params.items():
        if key not in known:
            out.append(Diagnostic("error", f"parameters.{key}", f"unknown key for {kind}"))
            continue
        problem = known[key].check(value)
        if problem:
            out.append(Diagnostic("error", f"parameters.{key}", problem))
    for key, param in known.items():
        if param.required and key not in params:
            out.append(Diagnostic("error", f"parameters.{key}", "required"))

    out.extend(_cross_checks(kind, params))
    return out


def errors_of(diagnostics: List[Diagnostic]) -> List[Diagnostic]:
    return [d for d in diagnostics if d.is_error]
