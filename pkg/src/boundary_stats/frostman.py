"""Second-moment statistics of a discrete Frostman measure on [1, 2]."""

import math
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import cKDTree

from boundary_stats.sampling import trace_rounds
from const import CANTOR_STAGE
from conformal.geometry import densify
from errors import ParameterError
from models.boundary import FrostmanExperiment, FrostmanMeasure
from models.loewner import TraceKind
from utils.logger import get_logger
from utils.settings import section

logger = get_logger("frostman")

DEFAULT_EPS = [2.0**-j for j in range(3, 7)]
FROSTMAN_HORIZON = 4.0
LEBESGUE_ATOMS = 256


def lebesgue(n_atoms: int = LEBESGUE_ATOMS) -> FrostmanMeasure:
    """Uniform atoms at the midpoints of n equal cells of [1, 2]."""
    if n_atoms < 1:
        raise ParameterError(f"n_atoms must be >= 1, got {n_atoms}")
    atoms = 1.0 + (np.arange(n_atoms) + 0.5) / n_atoms
    return FrostmanMeasure("lebesgue", atoms.tolist(), [1.0 / n_atoms] * n_atoms, dimension=1.0)


def point_mass(x: float = 1.5) -> FrostmanMeasure:
    if not 1.0 <= x <= 2.0:
        raise ParameterError(f"atom must lie in [1, 2], got {x}")
    return FrostmanMeasure("point_mass", [float(x)], [1.0], dimension=0.0)


def cantor(stage: Optional[int] = None) -> FrostmanMeasure:
    """Middle-thirds construction on [1, 2]: 2^stage interval midpoints, equal weights."""
    stage = int(section("boundary").get("cantor_stage", CANTOR_STAGE) if stage is None else stage)
    if not 0 <= stage <= 12:
        raise ParameterError(f"stage must lie in [0, 12], got {stage}")
    left = np.array([1.0])
    width = 1.0
    for _ in range(stage):
        width /= 3.0
        left = np.concatenate([left, left + 2.0 * width])
    atoms = np.sort(left + width / 2.0)
    n = atoms.size
    return FrostmanMeasure("cantor", atoms.tolist(), [1.0 / n] * n, dimension=math.log(2.0) / math.log(3.0))


MEASURES = {"lebesgue": lebesgue, "point_mass": point_mass, "cantor": cantor}


def measure_from_dict(data: dict) -> FrostmanMeasure:
    kind = data.get("kind", "cantor")
    if kind not in MEASURES:
        raise ParameterError(f"unknown measure {kind!r}", kind=kind)
    params = {k: v for k, v in data.items() if k != "kind"}
    return MEASURES[kind](**params)


def riesz_energy(measure: FrostmanMeasure, a: float) -> float:
    """Discrete a-energy: sum over i != j of mu_i mu_j |x_i - x_j|^-a."""
    x = np.asarray(measure.atoms)
    w = np.asarray(measure.weights)
    if x.size < 2:
        return 0.0
    diff = np.abs(x[:, None] - x[None, :])
    np.fill_diagonal(diff, np.inf)
    terms = (w[:, None] * w[None, :]) * diff ** (-a)
    return math.fsum(terms.ravel())


def frostman_experiment(
    measure: FrostmanMeasure,
    kappa: float,
    eps_list: Optional[Sequence[float]] = None,
    a: Optional[float] = None,
) -> FrostmanExperiment:
    """
    Experiment shell with exponent a (default 8/kappa - 1), the exact a-energy
    and the feasibility label (measure dimension above a).
    """
    if not 4.0 < kappa < 8.0:
        raise ParameterError(f"kappa must lie in (4, 8), got {kappa}", kappa=kappa)
    a = 8.0 / kappa - 1.0 if a is None else float(a)
    eps = sorted((float(e) for e in (DEFAULT_EPS if eps_list is None else eps_list)), reverse=True)
    if not eps or any(not e > 0 for e in eps):
        raise ParameterError("eps_list must hold positive values")
    if not all(1.0 <= x <= 2.0 for x in measure.atoms) or not measure.total_mass > 0:
        raise ParameterError("measure atoms must lie in [1, 2] with positive total mass")
    return FrostmanExperiment(
        a=a,
        measure=measure,
        eps_list=eps,
        energy=riesz_energy(measure, a),
        feasible=measure.dimension > a,
    )


def frostman_second_moment(
    experiment: FrostmanExperiment,
    kappa: float,
    n_traces: int,
    seed: int = 0,
    horizon: float = FROSTMAN_HORIZON,
    n_steps: Optional[int] = None,
    threads: Optional[int] = None,
    deadline: Optional[float] = None,
) -> FrostmanExperiment:
    """
    Fill in E[mu(C_eps)] and E[mu(C_eps)^2] over chordal traces from 0.

    C_eps is the set of atoms within eps of the (densified) trace. A zero
    first moment at some eps marks the experiment ``insufficient``.
    """
    eps = np.asarray(experiment.eps_list)
    atoms = np.asarray(experiment.measure.atoms)
    weights = np.asarray(experiment.measure.weights)
    query = np.column_stack([atoms, np.zeros_like(atoms)])
    spacing = float(eps.min()) / 4.0

    masses = []
    for batch in trace_rounds(kappa, n_traces, seed, TraceKind.CHORDAL, horizon, n_steps, threads, deadline):
        for row in batch.points:
            pts = densify(row, spacing)
            tree = cKDTree(np.column_stack([pts.real, pts.imag]))
            dist, _ = tree.query(query)
            masses.append([math.fsum(weights[dist <= e]) for e in eps])
    done = len(masses)
    if done == 0:
        experiment.insufficient = True
        experiment.truncated = True
        return experiment

    mu = np.asarray(masses)
    experiment.first_moments = [math.fsum(col) / done for col in mu.T]
    experiment.second_moments = [math.fsum(col * col) / done for col in mu.T]
    experiment.n_traces = done
    experiment.truncated = done < n_traces
    experiment.insufficient = any(f == 0 for f in experiment.first_moments)
    if experiment.insufficient:
        logger.warning("Zero first moment at some eps: insufficient statistics")
    logger.info(f"Frostman ({experiment.measure.name}) kappa={kappa}: ratios {experiment.ratios}")
    return experiment
