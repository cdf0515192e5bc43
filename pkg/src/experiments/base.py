"""Base experiment class for all experiment kinds."""

import time
from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional

from boundary_stats.sampling import deadline_from
from errors import LabError, NumericError
from models.experiment import ExperimentConfig
from storage.result_store import ResultStore
from utils.logger import get_run_logger


class BaseExperiment(ABC):
    """Base class for all experiments."""

    kind: str = ""

    def __init__(self, config: ExperimentConfig, store: ResultStore, threads: Optional[int] = None):
        """
        Initialize experiment.

        Args:
            config: Validated experiment document
            store: Writer for the run directory
            threads: Worker threads handed to the numerical modules
        """
        self.config = config
        self.params: Dict[str, Any] = dict(config.parameters)
        self.store = store
        self.threads = threads
        self.seed = int(config.seed)
        self.deadline = deadline_from(config.budget.max_seconds)
        self.summary: Dict[str, Any] = {}
        self.errors: List[str] = []
        self.truncated = False
        self.wall_time = 0.0
        self.log = get_run_logger("experiments", config.run_name, self.seed)

    @abstractmethod
    def execute(self) -> Dict[str, Any]:
        """
        Compute and write results through ``self.store``.

        Returns:
            Short summary for the manifest and the console table
        """
        pass

    def run(self) -> Dict[str, Any]:
        """
        Execute and time the experiment.

        Failures are logged with traceback and recorded in ``errors``; lab
        errors are re-raised unchanged, anything else as NumericError.
        """
        start = time.monotonic()
        self.log.info(f"Starting {self.name} experiment (seed={self.seed})")
        try:
            self.summary = self.execute()
        except LabError as e:
            self._record(e)
            raise
        except (ArithmeticError, ValueError, FloatingPointError) as e:
            self._record(e)
            raise NumericError(f"{self.name}: {e}") from e
        finally:
            self.wall_time = time.monotonic() - start
        self.log.info(f"{self.name} finished in {self.wall_time:.2f}s (truncated={self.truncated})")
        return self.summary

    def _record(self, error: Exception) -> None:
        error_msg = f"{type(error).__name__}: {error}"
        self.log.error(f"{self.name}: {error_msg}", exc_info=True)
        self.errors.append(error_msg)

    def param(self, key: str, default: Any = None) -> Any:
        value = self.params.get(key)
        return default if value is None else value

    def trace_count(self, key: str = "n_traces") -> int:
        """Requested trace count, capped by the trace budget."""
        requested = int(self.params[key])
        cap = self.config.budget.max_traces
        if cap is not None and requested > cap:
            self.log.warning(f"{self.name}: trace budget {cap} below requested {requested}")
            self.truncated = True
            return int(cap)
        return requested

    def mark_truncated(self, flag: bool) -> None:
        self.truncated = self.truncated or bool(flag)

    @property
    def name(self) -> str:
        """Get experiment name."""
        return self.kind or self.__class__.__name__.replace("Experiment", "").lower()
