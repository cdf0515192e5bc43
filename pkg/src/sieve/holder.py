"""Empirical derivative and Holder bounds on the good set."""

import math
from typing import Iterator, Tuple

import numpy as np

from conformal.maps import ConformalMap
from errors import GeometryError, ParameterError
from models.sieve import HolderReport, SieveMode, SieveResult
from sieve.classify import refined_parameters
from sieve.squares import good_set_contains
from utils.logger import get_logger
from utils.parallel import derive_seed

logger = get_logger("holder")

# Candidates drawn per block; block b is seeded by (seed, b)
BLOCK = 4096
MAX_BLOCKS = 2000
ARC_SAMPLES = 64
LOCAL_SCALES = 10.0


def holder_exponent_for(sieve: SieveResult) -> float:
    """p/2 for the bounded and unbounded sieves, 1 - 6 sqrt(1 - p) for the refined one."""
    if sieve.mode == SieveMode.REFINED:
        t, _ = refined_parameters(sieve.p)
        return 1.0 - 6.0 * t
    return sieve.p / 2.0


def image_hausdorff_bound(exponent: float, dimension: float) -> float:
    """dim f(E) <= dim E / exponent for a map Holder with that exponent on E."""
    if not 0 < exponent <= 1:
        raise ParameterError(f"Holder exponent must lie in (0, 1], got {exponent}", exponent=exponent)
    if not dimension >= 0:
        raise ParameterError(f"dimension must be >= 0, got {dimension}", dimension=dimension)
    return dimension / exponent


def _radial_points(rng: np.random.Generator, n: int, n_max: int) -> np.ndarray:
    """Angles uniform, 1 - |z| = 2^-u with u uniform on [0, n_max + 1]."""
    theta = rng.uniform(0.0, 2.0 * np.pi, n)
    u = rng.uniform(0.0, n_max + 1.0, n)
    return (1.0 - 2.0 ** (-u)) * np.exp(1j * theta)


def _point_blocks(seed: int, n_max: int) -> Iterator[np.ndarray]:
    for b in range(MAX_BLOCKS):
        yield _radial_points(np.random.default_rng(derive_seed(seed, b)), BLOCK, n_max)


def _good_points(sieve: SieveResult, samples: int, seed: int) -> np.ndarray:
    """First ``samples`` points of the seeded stream that lie in the good set."""
    kept = []
    count = 0
    for block in _point_blocks(seed, sieve.n_max):
        inside = block[good_set_contains(sieve, block)]
        kept.append(inside)
        count += inside.size
        if count >= samples:
            return np.concatenate(kept)[:samples]
    raise GeometryError(f"good set too small: {count} of {samples} points found", found=count)


def verify_derivative_bound(fmap: ConformalMap, sieve: SieveResult, samples: int = 1000, seed: int = 0) -> float:
    """
    Fitted constant C = max |f'(z)| (1 - |z|)^(1 - p/2) over sampled z in the good set.

    z = 0 is always included, so the identity gives exactly 1. The sample
    stream is prefix-consistent: more samples never lower C.
    """
    if int(samples) != samples or samples < 1:
        raise ParameterError(f"samples must be a positive integer, got {samples}", samples=samples)
    z = np.concatenate([[0.0 + 0.0j], _good_points(sieve, int(samples), seed)])
    ratio = np.abs(fmap.deriv(z)) * (1.0 - np.abs(z)) ** (1.0 - sieve.p / 2.0)
    C = float(np.max(ratio))
    logger.debug(f"Derivative bound over {z.size} points: C={C:.6g}")
    return C


def _pair_blocks(seed: int, n_max: int) -> Iterator[Tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Blocks of (z, z', is_local); even stream positions are local pairs."""
    for b in range(MAX_BLOCKS):
        rng = np.random.default_rng(derive_seed(seed, b))
        z = _radial_points(rng, BLOCK, n_max)
        far = _radial_points(rng, BLOCK, n_max)
        v = rng.uniform(0.0, LOCAL_SCALES, BLOCK)
        psi = rng.uniform(0.0, 2.0 * np.pi, BLOCK)
        near = z + (1.0 - np.abs(z)) * 2.0 ** (-v) / 2.0 * np.exp(1j * psi)
        local = (np.arange(BLOCK) % 2) == 0
        yield z, np.where(local, near, far), local


def _arc_in_domain(sieve: SieveResult, z: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Whether the circular leg of the radial-circular-radial path stays in the good set."""
    a = np.angle(z)
    d = np.angle(w / z)
    s = np.minimum(np.minimum(np.abs(z), np.abs(w)), 1.0 - np.abs(d) / (2.0 * np.pi))
    frac = np.linspace(0.0, 1.0, ARC_SAMPLES)
    arc = s[:, None] * np.exp(1j * (a[:, None] + frac[None, :] * d[:, None]))
    return np.all(good_set_contains(sieve, arc.ravel()).reshape(arc.shape), axis=1)


def verify_holder(
    fmap: ConformalMap,
    sieve: SieveResult,
    exponent: float,
    pairs: int = 1000,
    seed: int = 0,
) -> HolderReport:
    """
    Fitted constant max |f(z) - f(z')| / |z - z'|^exponent over pairs in the good set.

    Half of the pairs are local (z' within a fraction of 1 - |z| of z), half
    are independent. Each pair also gets the radial-circular-radial path check.

    Raises:
        ParameterError: exponent outside (0, 1]
    """
    if not math.isfinite(exponent) or not 0 < exponent <= 1:
        raise ParameterError(
            f"Holder exponent must lie in (0, 1], got {exponent}; the refined estimate "
            "1 - 6 sqrt(1 - p) is positive only for p > 35/36",
            exponent=exponent,
        )
    if int(pairs) != pairs or pairs < 1:
        raise ParameterError(f"pairs must be a positive integer, got {pairs}", pairs=pairs)

    zs, ws, locs = [], [], []
    count = 0
    for z, w, local in _pair_blocks(seed, sieve.n_max):
        keep = good_set_contains(sieve, z) & good_set_contains(sieve, w) & (z != w)
        zs.append(z[keep])
        ws.append(w[keep])
        locs.append(local[keep])
        count += int(keep.sum())
        if count >= pairs:
            break
    else:
        raise GeometryError(f"good set too small: {count} of {pairs} pairs found", found=count)

    z = np.concatenate(zs)[: int(pairs)]
    w = np.concatenate(ws)[: int(pairs)]
    local = np.concatenate(locs)[: int(pairs)]
    ratio = np.abs(fmap.eval(z) - fmap.eval(w)) / np.abs(z - w) ** exponent
    worst = int(np.argmax(ratio))
    on_path = _arc_in_domain(sieve, z, w)

    report = HolderReport(
        exponent=float(exponent),
        constant=float(ratio[worst]),
        pairs=int(z.size),
        worst_pair=(complex(z[worst]), complex(w[worst])),
        path_in_domain=float(np.mean(on_path)),
        local_constant=float(np.max(ratio[local])) if local.any() else 0.0,
        global_constant=float(np.max(ratio[~local])) if (~local).any() else 0.0,
    )
    logger.info(f"Holder check: C={report.constant:.6g} over {report.pairs} pairs (exponent {exponent:.4g})")
    return report
