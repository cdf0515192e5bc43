"""Branches of the d(kappa) upper bound."""

import math
from typing import Optional

from conformal.maps import ConformalMap
from const import DEFAULT_ALPHA, DEFAULT_C_JM
from errors import ParameterError
from models.spectrum import DimensionBound
from spectrum.dimension import solve_john_dimension
from utils.logger import get_logger
from utils.settings import section

logger = get_logger("bounds")


def refined_exponent(p: float) -> float:
    """1 - 6 sqrt(1 - p): the Holder exponent of the refined sieve (positive only for p > 35/36)."""
    return 1.0 - 6.0 * math.sqrt(1.0 - p)


def dkappa_bounds(
    kappa: float,
    c: Optional[float] = None,
    alpha: Optional[float] = None,
    fmap: Optional[ConformalMap] = None,
) -> DimensionBound:
    """
    Evaluate the available upper bounds on d(kappa) for kappa in (4, 8).

    Args:
        kappa: SLE parameter
        c: Integral means constant of the symbolic branch (config default 0.01)
        alpha: John-domain Holder exponent of the symbolic branch (config default 0.1)
        fmap: Optional boundary map; adds the John-equation branch for that domain

    Returns:
        DimensionBound with p = a = 8/kappa - 1, the refined branch
        1/(1 - 6 sqrt(1 - p)) when 6 sqrt(1 - p) < 1, the symbolic branch
        2 - c*alpha*p/2 and the implied constants C1 = c*alpha/16 and
        C2 = (refined - 1)/sqrt(kappa - 4)
    """
    kappa = float(kappa)
    if not math.isfinite(kappa) or not 4.0 < kappa < 8.0:
        raise ParameterError(f"kappa must lie in (4, 8), got {kappa}", kappa=kappa)
    cfg = section("spectrum")
    c = float(cfg.get("c_jones_makarov", DEFAULT_C_JM) if c is None else c)
    alpha = float(cfg.get("alpha_john", DEFAULT_ALPHA) if alpha is None else alpha)
    if not c > 0 or not 0 < alpha <= 1:
        raise ParameterError(f"need c > 0 and alpha in (0, 1], got c={c}, alpha={alpha}")

    p = 8.0 / kappa - 1.0
    eta = refined_exponent(p)
    applicable = eta > 0
    refined = 1.0 / eta if applicable else None
    if not applicable:
        logger.info(f"kappa={kappa}: refined branch inapplicable (6 sqrt(1-p) = {1.0 - eta:.4f} >= 1)")

    symbolic = 2.0 - c * alpha * p / 2.0
    c2 = (refined - 1.0) / math.sqrt(kappa - 4.0) if refined is not None else None

    john = None
    if fmap is not None:
        john = solve_john_dimension(fmap, kappa).d

    candidates = [2.0, symbolic] + [b for b in (refined, john) if b is not None]
    return DimensionBound(
        kappa=kappa,
        p=p,
        a=p,
        branch_refined=refined,
        refined_applicable=applicable,
        branch_symbolic={"c": c, "alpha": alpha, "value": symbolic},
        branch_john=john,
        c1=c * alpha / 16.0,
        c2=c2,
        combined=min(candidates),
    )
