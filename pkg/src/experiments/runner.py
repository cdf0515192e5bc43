"""Load, validate and run experiment documents."""

import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml

from const import APP_VERSION
from errors import ConfigError, LabError
from experiments.kinds import KINDS
from experiments.schema import errors_of, validate
from models.experiment import Diagnostic, ExperimentConfig, RunManifest
from storage.result_store import ResultStore
from utils.logger import get_logger
from utils.resources import default_threads
from utils.settings import get_settings

logger = get_logger("runner")


def load_document(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a JSON (or YAML) experiment document."""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"experiment file not found: {path}", key="<file>") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"cannot parse {path}: {e}", key="<file>") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: experiment document must be a mapping", key="<root>")
    return data


def validate_file(path: Union[str, Path]) -> List[Diagnostic]:
    """Diagnostics for a document on disk; parse failures become one error."""
    try:
        return validate(load_document(path))
    except ConfigError as e:
        return [Diagnostic("error", e.key or "<file>", str(e))]


def prepare(
    document: Dict[str, Any],
    output_dir: Optional[str] = None,
    seed_override: Optional[int] = None,
) -> ExperimentConfig:
    """
    Apply command-line overrides and validate.

    Raises:
        ConfigError: first error diagnostic, carrying its key
    """
    document = dict(document)
    if output_dir is not None:
        document["output_dir"] = str(output_dir)
    if seed_override is not None:
        document["seed"] = int(seed_override)

    diagnostics = validate(document)
    for d in diagnostics:
        if not d.is_error:
            logger.warning(str(d))
    problems = errors_of(diagnostics)
    if problems:
        first = problems[0]
        raise ConfigError(f"{first.key}: {first.message}", key=first.key, diagnostics=[str(d) for d in problems])
    return ExperimentConfig.from_dict(document)


def _threads(threads: Optional[int]) -> int:
    if threads:
        return int(threads)
    configured = int(get_settings().get("threads", 0) or 0)
    return configured if configured > 0 else default_threads()


def run(config: ExperimentConfig, threads: Optional[int] = None) -> RunManifest:
    """
    Run one experiment and write its manifest.

    Output goes to <output_dir>/<kind>-<config digest>, so different documents
    never share a directory and a repeated document rewrites identical files.
    Lab errors raised by the experiment end up in the manifest and its
    ``exit_code``; a budget cut gives exit code 4.
    """
    if config.kind not in KINDS:
        raise ConfigError(f"unknown experiment kind {config.kind!r}", key="kind")
    base = Path(config.output_dir or get_settings().get("output_dir"))
    run_dir = base / config.run_name
    try:
        store = ResultStore(run_dir)
    except OSError as e:
        raise ConfigError(f"output_dir is not writable: {e}", key="output_dir") from e

    workers = _threads(threads)
    experiment = KINDS[config.kind](config, store, threads=workers)
    manifest = RunManifest(config=config.to_dict(), version=APP_VERSION, run_dir=str(run_dir))

    start = time.monotonic()
    try:
        manifest.summary = experiment.run()
    except LabError as e:
        manifest.exit_code = e.exit_code
    manifest.wall_time = time.monotonic() - start
    manifest.errors = list(experiment.errors)
    manifest.truncated = experiment.truncated
    if manifest.exit_code == 0 and manifest.truncated:
        manifest.exit_code = 4
    manifest.files = store.outputs()
    store.write_manifest(manifest)
    logger.info(
        f"Run {config.run_name}: exit {manifest.exit_code}, {len(manifest.files)} files, {manifest.wall_time:.2f}s"
    )
    return manifest


def run_file(
    path: Union[str, Path],
    output_dir: Optional[str] = None,
    seed_override: Optional[int] = None,
    threads: Optional[int] = None,
) -> RunManifest:
    return run(prepare(load_document(path), output_dir, seed_override), threads=threads)
