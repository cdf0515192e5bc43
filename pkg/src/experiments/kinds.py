"""Experiment kinds: one class per kind, each writing its own result files."""

import math
from typing import Any, Dict, List, Optional, Type

import numpy as np

from boundary_stats.box_counting import box_counting_dimension
from boundary_stats.frostman import frostman_experiment, frostman_second_moment, measure_from_dict
from boundary_stats.hitting import hitting_experiment, ratio_test
from boundary_stats.trace_boundary import boundary_line_dimension, trace_boundary_dimension
from boundary_stats.two_sided import two_sided_intersection
from conformal.maps import ConformalMap, IdentityMap, map_from_dict
from conformal.snowflake import CLASSICAL_FLATNESS, koch_snowflake, similarity_dimension, write_curve_csv
from conformal.zipper import build_boundary_map
from const import DEFAULT_EVAL_POINTS, DEFAULT_N_MAX, ZIPPER_MAX_VERTICES
from errors import BudgetExceeded
from experiments.base import BaseExperiment
from experiments.plots import loglog_plot
from experiments.schema import CURVE_MAP_KINDS
from loewner.driving import write_driving_csv
from loewner.traces import default_eval_times, simulate, write_trace_csv
from models.boundary import BoxCount, DimensionReport
from models.conformal import JordanCurve
from models.loewner import TraceKind
from models.sieve import SieveMode, SieveResult
from sieve.classify import chain_inequality, classify_squares, refined_budget, total_squares
from sieve.holder import holder_exponent_for, image_hausdorff_bound, verify_derivative_bound, verify_holder
from sieve.john import build_john_domain
from spectrum.bounds import dkappa_bounds
from spectrum.dimension import check_universal_bound, covering_sum, dyadic_radii, estimate_beta, solve_john_dimension
from spectrum.means import CircleSamples
from utils.logger import get_logger
from utils.settings import section

logger = get_logger("kinds")

DEFAULT_T_VALUES = [0.25, 0.5, 1.0, 2.0]


def resolve_map(descriptor: Optional[Dict[str, Any]]) -> ConformalMap:
    """Closed-form maps from their descriptor; snowflakes and polygons through the zipper."""
    if descriptor is None:
        return IdentityMap()
    kind = descriptor.get("kind")
    if kind in CURVE_MAP_KINDS:
        logger.debug(f"Fitting a boundary map to the {kind} descriptor")
    if kind == "snowflake":
        curve = koch_snowflake(int(descriptor.get("depth", 3)), float(descriptor.get("flatness", CLASSICAL_FLATNESS)))
        return build_boundary_map(curve, center=0.0)
    if kind == "polygon":
        vertices = np.array([complex(x, y) for x, y in descriptor["vertices"]])
        center = descriptor.get("center")
        return build_boundary_map(JordanCurve(vertices=vertices), center=None if center is None else complex(*center))
    return map_from_dict(descriptor)


def _tag(value: float) -> str:
    return f"{value:g}"


def _box_rows(box: BoxCount) -> List[List[float]]:
    return [[s, c] for s, c in box.table()]


def box_plot(store, prefix: str, box: BoxCount, title: str, expected: Optional[float] = None) -> None:
    """Log-log plot of the non-empty box counts."""
    keep = [(s, c) for s, c in zip(box.scales, box.counts) if c > 0]
    path = loglog_plot(
        store.run_dir,
        prefix,
        [math.log(1.0 / s) for s, _ in keep],
        [math.log(c) for _, c in keep],
        box.slope,
        box.intercept,
        xlabel="log 1/scale",
        ylabel="log boxes",
        title=title,
        expected=expected,
    )
    store.add_file(path)


class _MonteCarlo(BaseExperiment):
    """Shared keyword plumbing for trace-based kinds."""

    def sampling_kwargs(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"threads": self.threads, "deadline": self.deadline}
        for key in ("horizon", "n_steps"):
            if self.params.get(key) is not None:
                out[key] = self.params[key]
        return out

    def dimension_outputs(self, name: str, report: DimensionReport, title: str) -> Dict[str, Any]:
        self.mark_truncated(report.truncated)
        self.store.write_json(f"{name}.json", report.to_dict())
        if report.box is not None:
            self.store.write_csv(f"{name}.csv", ["scale", "mean_boxes"], _box_rows(report.box))
            box_plot(self.store, name, report.box, title, report.expected)
        return {
            "kappa": report.kappa,
            "slope": report.slope,
            "expected": report.expected,
            "n_traces": report.n_traces,
            "degenerate": report.degenerate,
        }


class _SieveBased(BaseExperiment):
    """Kinds that start by classifying dyadic squares."""

    def capped_n_max(self, N: int) -> int:
        n_max = int(self.param("n_max", section("sieve").get("n_max", DEFAULT_N_MAX)))
        cap = self.config.budget.max_squares
        if cap is None or total_squares(N, n_max) <= cap:
            return n_max
        feasible = [m for m in range(N, n_max + 1) if total_squares(N, m) <= cap]
        if not feasible:
            raise BudgetExceeded(f"square budget {cap} is below the first generation ({2**N} squares)", max_squares=cap)
        self.log.warning(f"{self.name}: square budget {cap} lowers n_max from {n_max} to {feasible[-1]}")
        self.truncated = True
        return feasible[-1]

    def classify(self, fmap: ConformalMap) -> SieveResult:
        N = int(self.params["N"])
        n_max = self.capped_n_max(N)
        return classify_squares(
            fmap,
            float(self.params["p"]),
            N,
            mode=SieveMode(self.param("mode", "bounded")),
            n_max=n_max,
            quadrature_order=self.params.get("quadrature_order"),
            max_squares=self.config.budget.max_squares,
            threads=self.threads,
        )


class SieveExperiment(_SieveBased):
    kind = "sieve"

    def execute(self) -> Dict[str, Any]:
        descriptor = self.params.get("map")
        fmap = resolve_map(descriptor)
        sieve = self.classify(fmap)
        data: Dict[str, Any] = {
            "map": descriptor or fmap.to_dict(),
            "sieve": sieve.to_dict(),
            "empty": not sieve.bad_squares,
            "truncated": self.truncated,
        }
        samples = CircleSamples(fmap)
        if self.param("chain", False):
            data["chain"] = chain_inequality(fmap, sieve, samples=samples).to_dict()
        if sieve.mode == SieveMode.REFINED:
            data["refined_budget"] = refined_budget(fmap, sieve, samples=samples).to_dict()
        if self.param("john", False):
            john = build_john_domain(
                sieve, probes=self.params.get("probes"), grid=self.params.get("grid"), seed=self.seed
            )
            data["john"] = john.to_dict()

        self.store.write_json("sieve.json", data)
        rows = [[sq.n, sq.k, w] for sq, w in zip(sieve.bad_squares, sieve.bad_weights)]
        self.store.write_csv("bad_squares.csv", ["n", "k", "weight"], rows)
        return {
            "bad_squares": len(sieve.bad_squares),
            "content_bound": sieve.content_bound,
            "n_max": sieve.n_max,
            "chain_ok": (data["chain"]["lower_ok"] and data["chain"]["upper_ok"]) if "chain" in data else None,
        }


class HolderExperiment(_SieveBased):
    kind = "holder"

    def execute(self) -> Dict[str, Any]:
        descriptor = self.params.get("map")
        fmap = resolve_map(descriptor)
        sieve = self.classify(fmap)
        exponent = float(self.param("exponent", holder_exponent_for(sieve)))
        derivative = verify_derivative_bound(fmap, sieve, samples=int(self.param("samples", 1000)), seed=self.seed)
        report = verify_holder(fmap, sieve, exponent, pairs=int(self.param("pairs", 1000)), seed=self.seed)
        data: Dict[str, Any] = {
            "map": descriptor or fmap.to_dict(),
            "sieve": sieve.to_dict(),
            "derivative_constant": derivative,
            "holder": report.to_dict(),
            "truncated": self.truncated,
        }
        if self.params.get("boundary_dimension") is not None:
            data["image_dimension_bound"] = image_hausdorff_bound(exponent, float(self.params["boundary_dimension"]))
        self.store.write_json("holder.json", data)
        return {
            "exponent": exponent,
            "constant": report.constant,
            "derivative_constant": derivative,
            "path_in_domain": report.path_in_domain,
        }


class SpectrumExperiment(BaseExperiment):
    kind = "spectrum"

    def execute(self) -> Dict[str, Any]:
        descriptor = self.params.get("map")
        fmap = resolve_map(descriptor)
        t_values = self.param("t", DEFAULT_T_VALUES)
        t_values = [float(t) for t in (t_values if isinstance(t_values, list) else [t_values])]
        radii = dyadic_radii(self.params.get("j_min"), self.params.get("j_max"))
        samples = CircleSamples(fmap)

        entries = []
        summary: Dict[str, Any] = {}
        for t in t_values:
            estimate = estimate_beta(fmap, t, radii, samples=samples, threads=self.threads)
            check = check_universal_bound(estimate, self.params.get("tolerance"))
            entries.append({"estimate": estimate.to_dict(), "universal_bound": check.to_dict()})
            self.store.write_csv(f"means_t{_tag(t)}.csv", ["radius", "mean"], estimate.table())
            path = loglog_plot(
                self.store.run_dir,
                f"spectrum_t{_tag(t)}",
                np.log(1.0 / (1.0 - np.asarray(estimate.radii))),
                np.log(np.asarray(estimate.means)),
                estimate.beta_hat,
                estimate.intercept,
                xlabel="log 1/(1 - r)",
                ylabel=f"log mean |f'|^{_tag(t)}",
                title=f"Integral means, t = {_tag(t)}",
            )
            self.store.add_file(path)
            summary[f"beta({_tag(t)})"] = estimate.beta_hat
            summary[f"bound_ok({_tag(t)})"] = check.passed
        self.store.write_json("spectrum.json", {"map": descriptor or fmap.to_dict(), "spectrum": entries})
        return summary


class JohnDimensionExperiment(BaseExperiment):
    kind = "john-dimension"

    def execute(self) -> Dict[str, Any]:
        descriptor = self.params.get("map")
        fmap = resolve_map(descriptor)
        kappa = float(self.params["kappa"])
        radii = dyadic_radii(self.params.get("j_min"), self.params.get("j_max"))
        samples = CircleSamples(fmap)
        result = solve_john_dimension(fmap, kappa, radii, samples=samples)
        data: Dict[str, Any] = {"map": descriptor or fmap.to_dict(), "john_dimension": result.to_dict()}
        summary: Dict[str, Any] = {"kappa": kappa, "d": result.d, "solved": result.solved}
        if self.params.get("covering_t") is not None:
            covering = covering_sum(
                fmap,
                float(self.params["covering_t"]),
                kappa,
                int(self.param("N", 4)),
                n_max=self.params.get("n_max"),
                samples=samples,
            )
            data["covering_sum"] = covering.to_dict()
            rows = [[n, term, s] for n, term, s in zip(covering.generations, covering.terms, covering.partial_sums)]
            self.store.write_csv("covering_sum.csv", ["n", "term", "partial_sum"], rows)
            summary["covering_convergent"] = covering.convergent
        self.store.write_json("john_dimension.json", data)
        return summary


class HittingExperimentKind(_MonteCarlo):
    kind = "hitting"

    def execute(self) -> Dict[str, Any]:
        kappa = float(self.params["kappa"])
        experiment = hitting_experiment(
            kappa,
            float(self.param("center_angle", math.pi / 2)),
            [float(r) for r in self.params["radii"]],
            self.trace_count(),
            seed=self.seed,
            delta=self.params.get("delta"),
            strict=bool(self.param("strict", True)),
            **self.sampling_kwargs(),
        )
        self.mark_truncated(experiment.truncated)
        data: Dict[str, Any] = {"hitting": experiment.to_dict()}
        summary: Dict[str, Any] = {
            "kappa": kappa,
            "n_traces": experiment.n_traces,
            "exponent": experiment.exponent,
            "expected": experiment.predicted_exponent,
        }
        if self.params.get("ratio") is not None:
            r_large, r_small = sorted((float(r) for r in self.params["ratio"]), reverse=True)
            test = ratio_test(experiment, r_large, r_small)
            data["ratio_test"] = test.to_dict()
            summary["ratio_within_3sd"] = test.within()
        self.store.write_json("hitting.json", data)
        self.store.write_csv(
            "hitting.csv",
            ["radius", "hits", "estimate", "stderr"],
            [[e.radius, e.hits, e.estimate, e.stderr] for e in experiment.estimates()],
        )

        positive = [(e.radius, e.estimate) for e in experiment.estimates() if e.hits > 0]
        if experiment.exponent is not None and len(positive) >= 2:
            x = np.log([r for r, _ in positive])
            y = np.log([q for _, q in positive])
            intercept = float(y.mean() - experiment.exponent * x.mean())
            path = loglog_plot(
                self.store.run_dir,
                "hitting",
                x,
                y,
                experiment.exponent,
                intercept,
                xlabel="log r",
                ylabel="log P(hit)",
                title=f"Hitting probability, kappa = {_tag(kappa)}",
                expected=experiment.predicted_exponent,
            )
            self.store.add_file(path)
        return summary


class LineDimensionExperiment(_MonteCarlo):
    kind = "line-dimension"

    def execute(self) -> Dict[str, Any]:
        kappa = float(self.params["kappa"])
        kwargs = self.sampling_kwargs()
        if self.params.get("window") is not None:
            kwargs["window"] = float(self.params["window"])
        report = boundary_line_dimension(
            kappa, self.trace_count(), scales=self.params.get("scales"), seed=self.seed, **kwargs
        )
        return self.dimension_outputs("line_dimension", report, f"Trace on the real line, kappa = {_tag(kappa)}")


class TraceBoundaryExperiment(_MonteCarlo):
    kind = "trace-boundary"

    def execute(self) -> Dict[str, Any]:
        fmap = resolve_map(self.params.get("map"))
        kappa = float(self.params["kappa"])
        report = trace_boundary_dimension(
            fmap,
            kappa,
            self.trace_count(),
            scales=self.params.get("scales"),
            seed=self.seed,
            **self.sampling_kwargs(),
        )
        return self.dimension_outputs("trace_boundary", report, f"Image trace near the boundary, kappa = {_tag(kappa)}")


class FrostmanExperimentKind(_MonteCarlo):
    kind = "frostman"

    def execute(self) -> Dict[str, Any]:
        kappa = float(self.params["kappa"])
        measure = measure_from_dict(self.param("measure", {"kind": "cantor"}))
        experiment = frostman_experiment(measure, kappa, self.params.get("eps"), self.params.get("a"))
        experiment = frostman_second_moment(
            experiment, kappa, self.trace_count(), seed=self.seed, **self.sampling_kwargs()
        )
        self.mark_truncated(experiment.truncated)
        self.store.write_json("frostman.json", experiment.to_dict())
        self.store.write_csv("frostman.csv", ["eps", "first_moment", "second_moment", "ratio"], experiment.table())
        return {
            "measure": measure.name,
            "a": experiment.a,
            "feasible": experiment.feasible,
            "ratio_spread": experiment.ratio_spread,
            "cauchy_schwarz_ok": experiment.cauchy_schwarz_ok,
        }


class DkappaExperiment(BaseExperiment):
    kind = "dkappa"

    def execute(self) -> Dict[str, Any]:
        descriptor = self.params.get("map")
        fmap = resolve_map(descriptor) if descriptor is not None else None
        bound = dkappa_bounds(float(self.params["kappa"]), self.params.get("c"), self.params.get("alpha"), fmap=fmap)
        self.store.write_json("dkappa.json", {"map": descriptor, "bounds": bound.to_dict()})
        return {
            "p": bound.p,
            "refined": bound.branch_refined,
            "refined_applicable": bound.refined_applicable,
            "combined": bound.combined,
        }


class TraceExperiment(BaseExperiment):
    kind = "trace"

    def execute(self) -> Dict[str, Any]:
        kappa = float(self.params["kappa"])
        cfg = section("boundary")
        horizon = float(self.param("horizon", 1.0))
        n_steps = int(self.param("n_steps", cfg.get("n_steps", 1000)))
        kind = TraceKind(self.param("trace_kind", TraceKind.CHORDAL.value))
        eval_times = default_eval_times(horizon, int(self.param("eval_points", DEFAULT_EVAL_POINTS)))
        driving, trace = simulate(kappa, horizon, n_steps, self.seed, kind=kind, eval_times=eval_times)
        self.store.add_file(write_driving_csv(driving, self.store.path("driving.csv")))
        self.store.add_file(write_trace_csv(trace, self.store.path("trace.csv")))
        flagged = int(np.count_nonzero(trace.flags)) if trace.flags is not None else 0
        return {"kappa": kappa, "kind": kind.value, "points": len(trace), "near_boundary_flags": flagged}


class SnowflakeExperiment(BaseExperiment):
    kind = "snowflake"

    def execute(self) -> Dict[str, Any]:
        depth = int(self.params["depth"])
        flatness = float(self.param("flatness", CLASSICAL_FLATNESS))
        curve = koch_snowflake(depth, flatness)
        box = box_counting_dimension(curve.vertices, self.params.get("scales"))
        data: Dict[str, Any] = {
            "curve": {"depth": depth, "flatness": flatness, "segments": curve.n_segments, "length": curve.length},
            "similarity_dimension": similarity_dimension(flatness),
            "box": box.to_dict(),
        }
        if self.param("zipper", False) and curve.n_segments <= ZIPPER_MAX_VERTICES:
            fmap = build_boundary_map(curve, center=0.0)
            data["zipper"] = {"vertices": fmap.curve.n_segments, "conformal_radius": float(abs(fmap.deriv(0.0)))}
        elif self.param("zipper", False):
            self.log.warning(f"Depth {depth} snowflake exceeds the zipper vertex limit; map skipped")

        self.store.write_json("snowflake.json", data)
        self.store.add_file(write_curve_csv(curve, self.store.path("snowflake_curve.csv")))
        self.store.write_csv("snowflake_boxes.csv", ["scale", "boxes"], _box_rows(box))
        title = f"Snowflake depth {depth}, flatness {_tag(flatness)}"
        box_plot(self.store, "snowflake", box, title, data["similarity_dimension"])
        return {"box_dimension": box.slope, "similarity_dimension": data["similarity_dimension"]}


class TwoSidedExperiment(_MonteCarlo):
    kind = "two-sided"

    def execute(self) -> Dict[str, Any]:
        kappa = float(self.params["kappa"])
        kwargs = self.sampling_kwargs()
        if self.params.get("window") is not None:
            kwargs["window"] = [float(w) for w in self.params["window"]]
        report = two_sided_intersection(kappa, self.trace_count(), self.seed, etas=self.params.get("etas"), **kwargs)
        self.mark_truncated(report.truncated)
        self.store.write_json("two_sided.json", report.to_dict())
        self.store.write_csv("two_sided.csv", ["eta", "frequency"], report.table())
        return {"kappa": kappa, "pairs": report.n_pairs, "frequency(min eta)": report.frequencies[-1]}


KINDS: Dict[str, Type[BaseExperiment]] = {
    cls.kind: cls
    for cls in (
        SieveExperiment,
        HolderExperiment,
        SpectrumExperiment,
        JohnDimensionExperiment,
        HittingExperimentKind,
        LineDimensionExperiment,
        FrostmanExperimentKind,
        TraceBoundaryExperiment,
        DkappaExperiment,
        TraceExperiment,
        SnowflakeExperiment,
        TwoSidedExperiment,
    )
}
