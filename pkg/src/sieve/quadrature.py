"""Weight integrals over the inner halves and inner segments of dyadic squares."""

from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np

from conformal.maps import ConformalMap
from const import DEFAULT_QUADRATURE_ORDER, MAX_QUADRATURE_ORDER
from errors import NumericError, ParameterError
from models.sieve import DyadicSquare, SieveMode
from utils.logger import get_logger

logger = get_logger("quadrature")

# Integrand spread (max/min over the nodes) that triggers order doubling
REFINE_RATIO = 4.0
REFINE_RTOL = 1e-6


@lru_cache(maxsize=16)
def gauss_nodes(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(order)
    return (x + 1.0) / 2.0, w / 2.0


def _phi(fmap: ConformalMap, z: np.ndarray, mode: SieveMode, t_exp: float) -> np.ndarray:
    d = np.abs(fmap.deriv(z))
    if mode == SieveMode.BOUNDED:
        return d * d
    if mode == SieveMode.UNBOUNDED:
        f = np.abs(fmap.eval(z))
        with np.errstate(divide="ignore", invalid="ignore"):
            damp = np.where(f > 1.0, f * np.log(f), 1.0)
        damp = np.maximum(damp, 1.0)
        return (d / damp) ** 2
    return d**t_exp


def _nodes(ns: np.ndarray, ks: np.ndarray, mode: SieveMode, order: int):
    """Quadrature points and weights for a batch of squares, shape (squares, nodes)."""
    x, w = gauss_nodes(order)
    side = 2.0 ** (-ns.astype(float))
    a0 = 2.0 * np.pi * ks * side
    width = 2.0 * np.pi * side
    r_in = 1.0 - side
    theta = a0[:, None] + width[:, None] * x[None, :]

    if mode == SieveMode.REFINED:
        z = r_in[:, None] * np.exp(1j * theta)
        weights = (r_in * width)[:, None] * w[None, :]
        return z, weights

    depth = side / 2.0
    r = r_in[:, None] + depth[:, None] * x[None, :]
    z = r[:, :, None] * np.exp(1j * theta[:, None, :])
    weights = (depth * width)[:, None, None] * (w[:, None] * w[None, :])[None, :, :] * r[:, :, None]
    m = len(ns)
    return z.reshape(m, -1), weights.reshape(m, -1)


def _batch(fmap, ns, ks, mode, t_exp, order):
    z, weights = _nodes(ns, ks, mode, order)
    values = _phi(fmap, z.ravel(), mode, t_exp).reshape(z.shape)
    if not np.all(np.isfinite(values)):
        bad = int(np.argmax(~np.all(np.isfinite(values), axis=1)))
        raise NumericError(
            f"non-finite weight in square ({int(ns[bad])}, {int(ks[bad])})",
            square=[int(ns[bad]), int(ks[bad])],
        )
    return np.sum(values * weights, axis=1), values


def _spread(values: np.ndarray) -> np.ndarray:
    lo = np.min(values, axis=1)
    hi = np.max(values, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(lo > 0, hi / lo, np.where(hi > 0, np.inf, 1.0))


def _check_order(order: int) -> int:
    if int(order) != order or order < 4:
        raise ParameterError(f"quadrature order must be an integer >= 4, got {order}", order=order)
    return int(order)


def integrate_squares(
    fmap: ConformalMap,
    squares: Sequence[DyadicSquare],
    mode: SieveMode = SieveMode.BOUNDED,
    t_exp: float = 2.0,
    quadrature_order: int = DEFAULT_QUADRATURE_ORDER,
    max_order: int = MAX_QUADRATURE_ORDER,
    refine_ratio: float = REFINE_RATIO,
    rtol: float = REFINE_RTOL,
) -> np.ndarray:
    """
    Weight integrals of many squares at once.

    Squares whose integrand varies by more than ``refine_ratio`` over the
    nodes are recomputed with doubled order until the value settles or
    ``max_order`` is reached.
    """
    order = _check_order(quadrature_order)
    mode = SieveMode(mode)
    if not squares:
        return np.zeros(0)
    ns = np.array([sq.n for sq in squares], dtype=np.int64)
    ks = np.array([sq.k for sq in squares], dtype=np.int64)

    totals, values = _batch(fmap, ns, ks, mode, t_exp, order)
    pending = np.flatnonzero(_spread(values) > refine_ratio)
    while pending.size and order < max_order:
        order = min(2 * order, max_order)
        refined, values = _batch(fmap, ns[pending], ks[pending], mode, t_exp, order)
        change = np.abs(refined - totals[pending]) / np.maximum(np.abs(refined), np.finfo(float).tiny)
        totals[pending] = refined
        logger.debug(f"Refined {pending.size} squares to order {order}")
        pending = pending[(change > rtol) & (_spread(values) > refine_ratio)]
    return totals


def integrate_weight(
    fmap: ConformalMap,
    square: DyadicSquare,
    mode: SieveMode = SieveMode.BOUNDED,
    t_exp: float = 2.0,
    quadrature_order: int = DEFAULT_QUADRATURE_ORDER,
) -> float:
    """
    Weight integral of one square.

    Args:
        fmap: Map defined on the disk
        square: Dyadic square
        mode: BOUNDED (|f'|^2 over T(Q)), UNBOUNDED (damped weight over T(Q))
            or REFINED (|f'|^t_exp along L(Q))
        t_exp: Exponent for the refined mode
        quadrature_order: Gauss-Legendre nodes per direction, at least 4

    Returns:
        The integral value
    """
    return float(integrate_squares(fmap, [square], mode, t_exp, quadrature_order)[0])

