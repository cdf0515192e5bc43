"""Koch-type snowflake curves with adjustable bump height."""

import csv
import math
from pathlib import Path
from typing import Union

import numpy as np
from scipy.optimize import brentq

from const import MAX_SNOWFLAKE_DEPTH
from errors import ParameterError
from models.conformal import JordanCurve
from utils.formatters import format_float
from utils.logger import get_logger
from utils.resources import check_allocation

logger = get_logger("snowflake")

# Flatness giving equilateral bumps (the standard Koch snowflake)
CLASSICAL_FLATNESS = 0.5
BASE_CIRCUMRADIUS = 1.0 / math.sqrt(3.0)


def base_triangle() -> np.ndarray:
    """Closed counter-clockwise equilateral triangle with side 1 centred at 0."""
    k = np.arange(3)
    v = BASE_CIRCUMRADIUS * np.exp(1j * (np.pi / 2 + 2 * np.pi * k / 3))
    return np.append(v, v[0])


def refine(vertices: np.ndarray, flatness: float) -> np.ndarray:
    """
    Replace every segment p -> q by the four-segment generator.

    The middle third is lifted outward (to the right of a counter-clockwise
    curve) into a bump of height flatness * sqrt(3)/3 * |q - p|.
    """
    p = vertices[:-1]
    q = vertices[1:]
    d = q - p
    a = p + d / 3.0
    b = p + 2.0 * d / 3.0
    apex = (p + q) / 2.0 + flatness * (math.sqrt(3.0) / 3.0) * (-1j) * d

    out = np.empty(4 * len(p) + 1, dtype=complex)
    out[0:-1:4] = p
    out[1:-1:4] = a
    out[2:-1:4] = apex
    out[3:-1:4] = b
    out[-1] = vertices[-1]
    return out


def koch_snowflake(depth: int, flatness: float = CLASSICAL_FLATNESS) -> JordanCurve:
    """
    Koch-type snowflake around the unit-side triangle.

    Args:
        depth: Number of refinements, 0..8 (depth 0 is the triangle)
        flatness: Bump height control in (0, 1); 1/2 is the classical curve

    Returns:
        Closed JordanCurve with 3 * 4**depth segments
    """
    if int(depth) != depth or not 0 <= depth <= MAX_SNOWFLAKE_DEPTH:
        raise ParameterError(f"depth must be an integer in [0, {MAX_SNOWFLAKE_DEPTH}], got {depth}", depth=depth)
    if not 0 < flatness < 1:
        raise ParameterError(f"flatness must lie in (0, 1), got {flatness}", flatness=flatness)

    n_vertices = 3 * 4 ** int(depth) + 1
    # the last refinement holds the input and output arrays at once
    check_allocation(n_vertices * 16 * 5 // 4, f"snowflake depth {depth}")

    vertices = base_triangle()
    for _ in range(int(depth)):
        vertices = refine(vertices, flatness)
    logger.debug(f"Snowflake depth={depth} flatness={flatness}: {len(vertices) - 1} segments")
    return JordanCurve(vertices=vertices, depth=int(depth), flatness=float(flatness))


def displacement_bound(flatness: float) -> float:
    """
    Upper bound on the Hausdorff distance between any-depth snowflake and the triangle.

    Generation g moves points by at most one bump height, flatness * sqrt(3)/3 * 3**-g,
    and the geometric series sums to flatness * sqrt(3)/2.
    """
    return flatness * math.sqrt(3.0) / 2.0


def similarity_dimension(flatness: float) -> float:
    """
    Similarity dimension D of the limit curve: 2 * 3**-D + 2 * s**D = 1.

    ``s`` is the length ratio of a bump side. This is the Hausdorff dimension
    whenever the curve is simple (flatness up to the classical value).
    """
    side = math.hypot(1.0 / 6.0, flatness * math.sqrt(3.0) / 3.0)
    return float(brentq(lambda d: 2.0 * 3.0 ** (-d) + 2.0 * side**d - 1.0, 1.0, 10.0))


def write_curve_csv(curve: JordanCurve, path: Union[str, Path]) -> Path:
    """Write the open vertex list as (re, im) rows; the closing vertex is implied."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["re", "im"])
        for z in curve.vertices[:-1]:
            writer.writerow([format_float(z.real), format_float(z.imag)])
    return path


def read_curve_csv(path: Union[str, Path], depth=None, flatness=None) -> JordanCurve:
    """Load a curve written by write_curve_csv."""
    with open(path, "r", encoding="utf-8", newline="") as f:
        vertices = [complex(float(row["re"]), float(row["im"])) for row in csv.DictReader(f)]
    if len(vertices) < 3:
        raise ParameterError(f"curve file {path} has {len(vertices)} vertices, need at least 3")
    return JordanCurve(vertices=np.array(vertices, dtype=complex), depth=depth, flatness=flatness)
