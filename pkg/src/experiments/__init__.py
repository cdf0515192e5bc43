"""Config-driven experiment runs: validation, dispatch, result files and plots."""

from experiments.runner import load_document, prepare, run, run_file, validate_file
from experiments.schema import validate

__all__ = ["load_document", "prepare", "run", "run_file", "validate", "validate_file"]
