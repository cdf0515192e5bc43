"""Data models for experiment documents and run manifests."""

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

EXPERIMENT_KINDS = (
    "sieve",
    "holder",
    "spectrum",
    "john-dimension",
    "hitting",
    "line-dimension",
    "frostman",
    "trace-boundary",
    "dkappa",
    "trace",
    "snowflake",
    "two-sided",
)

CONFIG_KEYS = ("kind", "parameters", "seed", "output_dir", "budget")
BUDGET_KEYS = ("max_traces", "max_squares", "max_seconds")


@dataclass
class Budget:
    """Run limits; None means unlimited."""

    max_traces: Optional[int] = None
    max_squares: Optional[int] = None
    max_seconds: Optional[float] = None

    def to_dict(self) -> dict:
        return {"max_traces": self.max_traces, "max_squares": self.max_squares, "max_seconds": self.max_seconds}

    @classmethod
    def from_dict(cls, data: Optional[dict]) -> "Budget":
        data = data or {}
        return cls(
            max_traces=None if data.get("max_traces") is None else int(data["max_traces"]),
            max_squares=None if data.get("max_squares") is None else int(data["max_squares"]),
            max_seconds=None if data.get("max_seconds") is None else float(data["max_seconds"]),
        )


@dataclass
class ExperimentConfig:
    """One experiment document."""

    kind: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    output_dir: Optional[str] = None
    budget: Budget = field(default_factory=Budget)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "parameters": self.parameters,
            "seed": self.seed,
            "output_dir": self.output_dir,
            "budget": self.budget.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        return cls(
            kind=str(data["kind"]),
            parameters=dict(data.get("parameters") or {}),
            seed=int(data.get("seed", 0)),
            output_dir=data.get("output_dir"),
            budget=Budget.from_dict(data.get("budget")),
        )

    @property
    def digest(self) -> str:
        """sha256 of the canonical document without ``output_dir``."""
        payload = {k: v for k, v in self.to_dict().items() if k != "output_dir"}
        raw = json.dumps(payload, separators=(",", ":"), sort_keys=True, default=str).encode("utf-8")
        return hashlib.sha256(raw).hexdigest()

    @property
    def run_name(self) -> str:
        return f"{self.kind}-{self.digest[:12]}"


@dataclass
class Diagnostic:
    """One validation finding."""

    level: str  # "error" or "warning"
    key: str
    message: str

    @property
    def is_error(self) -> bool:
        return self.level == "error"

    def __str__(self) -> str:
        return f"{self.level}: {self.key}: {self.message}"

    def to_dict(self) -> dict:
        return {"level": self.level, "key": self.key, "message": self.message}


@dataclass
class OutputFile:
    path: str
    sha256: str
    size: int

    def to_dict(self) -> dict:
        return {"path": self.path, "sha256": self.sha256, "bytes": self.size}


@dataclass
class RunManifest:
    """
    Record of one run.

    Attributes:
        config: echo of the experiment document
        version: code version that produced the files
        wall_time: seconds spent in the run
        files: emitted files (relative to run_dir) with content digests
        truncated: a budget cut the run short
        errors: messages of failures raised during the run
        exit_code: process exit code for this run
    """

    config: Dict[str, Any]
    version: str
    run_dir: str
    wall_time: float = 0.0
    files: List[OutputFile] = field(default_factory=list)
    truncated: bool = False
    errors: List[str] = field(default_factory=list)
    exit_code: int = 0
    summary: Dict[str, Any] = field(default_factory=dict)

    @property
    def digests(self) -> Dict[str, str]:
        return {f.path: f.sha256 for f in self.files}

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "version": self.version,
            "run_dir": self.run_dir,
            "wall_time": self.wall_time,
            "files": [f.to_dict() for f in self.files],
            "truncated": self.truncated,
            "errors": list(self.errors),
            "exit_code": self.exit_code,
            "summary": self.summary,
        }
