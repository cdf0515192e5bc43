"""Dyadic squares near the unit circle, the good set and disc covers."""

import math
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from const import DISC_COVER_FACTOR
from errors import ParameterError
from models.sieve import DyadicSquare, SieveResult


def generation(n: int) -> List[DyadicSquare]:
    """All 2^n squares of generation n."""
    return [DyadicSquare(n, k) for k in range(2**n)]


def square_index(z, n: int) -> np.ndarray:
    """Angular index k of the generation-n square above each point."""
    theta = np.mod(np.angle(np.asarray(z, dtype=complex)), 2.0 * np.pi)
    k = np.floor(theta * 2**n / (2.0 * np.pi)).astype(np.int64)
    return np.minimum(k, 2**n - 1)


def in_square_region(z, n: int) -> np.ndarray:
    """Points with 1 - 2^-n <= |z| < 1 (inside some generation-n square)."""
    r = np.abs(np.asarray(z, dtype=complex))
    return (r >= 1.0 - 2.0 ** (-n)) & (r < 1.0)


def good_set_contains(sieve: SieveResult, z) -> np.ndarray:
    """
    Membership in the good set D = disk minus the union of bad squares.

    Args:
        sieve: Classified sieve
        z: Complex scalar or array

    Returns:
        Boolean array (or bool for scalar input)
    """
    arr = np.asarray(z, dtype=complex)
    inside = np.abs(arr) < 1.0
    for n, ks in sieve.bad_by_generation.items():
        candidates = in_square_region(arr, n)
        if not candidates.any():
            continue
        hit = candidates & np.isin(square_index(arr, n), np.asarray(ks, dtype=np.int64))
        inside &= ~hit
    return bool(inside) if arr.ndim == 0 else inside


def disc_cover(squares: Iterable[DyadicSquare], factor: float = DISC_COVER_FACTOR) -> List[Tuple[complex, float]]:
    """Boundary-centred discs B(exp(2 pi i (k + 1/2) / 2^n), factor * 2^-n) containing each square."""
    return [(sq.boundary_center, factor * sq.side) for sq in squares]


def hausdorff_content(cover: Sequence[Tuple[complex, float]], p: float) -> float:
    """
    Sum of r^p over a disc cover (an upper bound on the p-dimensional content).

    Raises:
        ParameterError: non-positive radius or p
    """
    if not p > 0 or not math.isfinite(p):
        raise ParameterError(f"p must be positive and finite, got {p}", p=p)
    radii = [float(r) for _, r in cover]
    if any(not r > 0 for r in radii):
        raise ParameterError("disc radii must be positive")
    return math.fsum(r**p for r in radii)


def content_of(squares: Iterable[DyadicSquare], p: float) -> float:
    """Sum of l(Q)^p in the given order."""
    return math.fsum(sq.side**p for sq in squares)


def square_cover_check(square: DyadicSquare, factor: float = DISC_COVER_FACTOR, samples: int = 33) -> bool:
    """Whether a grid over the closed square lies in its boundary-centred disc."""
    a0, a1 = square.angles
    r = np.linspace(square.r_inner, 1.0, samples)
    a = np.linspace(a0, a1, samples)
    pts = r[:, None] * np.exp(1j * a[None, :])
    return bool(np.all(np.abs(pts - square.boundary_center) <= factor * square.side))
