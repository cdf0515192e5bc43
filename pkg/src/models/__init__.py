"""Data models for the lab."""

from models.boundary import (
    BoxCount,
    DimensionReport,
    FrostmanExperiment,
    FrostmanMeasure,
    HittingEstimate,
    HittingExperiment,
    RatioTest,
    TwoSidedReport,
)
from models.conformal import JordanCurve, MapKind, SourceDomain
from models.experiment import Budget, Diagnostic, ExperimentConfig, OutputFile, RunManifest
from models.loewner import DrivingFunction, Trace, TraceBatch, TraceKind
from models.sieve import ChainReport, DyadicSquare, HolderReport, JohnDomainReport, RefinedBudget, SieveMode, SieveResult
from models.spectrum import BoundCheck, CoveringSum, DimensionBound, IntegralMeans, JohnDimension, SpectrumEstimate

__all__ = [
    "BoundCheck",
    "BoxCount",
    "Budget",
    "ChainReport",
    "CoveringSum",
    "Diagnostic",
    "DimensionBound",
    "DimensionReport",
    "DrivingFunction",
    "DyadicSquare",
    "ExperimentConfig",
    "FrostmanExperiment",
    "FrostmanMeasure",
    "HittingEstimate",
    "HittingExperiment",
    "HolderReport",
    "IntegralMeans",
    "JohnDimension",
    "JohnDomainReport",
    "JordanCurve",
    "MapKind",
    "OutputFile",
    "RatioTest",
    "RefinedBudget",
    "RunManifest",
    "SieveMode",
    "SieveResult",
    "SourceDomain",
    "SpectrumEstimate",
    "Trace",
    "TraceBatch",
    "TraceKind",
    "TwoSidedReport",
]
