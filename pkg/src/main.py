#!/usr/bin/env python3
"""
SLE Rough Domain Lab
Runs experiment documents: Loewner traces, dyadic sieves, integral means and boundary statistics.
"""

import argparse
import logging
import os
import sys
import time
from pathlib import Path

# Check for --debug early (before full arg parsing) to enable startup profiling
_debug_mode = "--debug" in sys.argv or os.getenv("SLE_LAB_DEBUG", "").lower() in ("1", "true")

_startup_start = time.time()
_startup_marks = {}


def _mark(label: str):
    """Record startup timing mark (only outputs in debug mode)."""
    if not _debug_mode:
        return
    elapsed = (time.time() - _startup_start) * 1000
    _startup_marks[label] = elapsed
    print(f"[STARTUP] {label}: {elapsed:.1f}ms", flush=True)


_mark("Python start")

import sentry_sdk  # noqa: E402
from dotenv import load_dotenv  # noqa: E402
from rich.console import Console  # noqa: E402
from rich.table import Table  # noqa: E402

# Ensure src is in python path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from const import APP_NAME, APP_VERSION, DEFAULT_CONFIG, LOGGER_PREFIX  # noqa: E402
from errors import LabError  # noqa: E402
from utils.formatters import format_estimate, format_seconds, format_verdict  # noqa: E402
from utils.logger import setup_exception_logging, setup_logging  # noqa: E402

_mark("After local imports")

# Load environment variables from .env file
load_dotenv()


if os.getenv("SENTRY_DSN"):
    sentry_sdk.init(
        dsn=os.getenv("SENTRY_DSN"),
        traces_sample_rate=1.0,
        profiles_sample_rate=1.0,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=f"{APP_NAME} - run SLE experiments from JSON documents")
    parser.add_argument(
        "-c", "--config", default=DEFAULT_CONFIG, help=f"Numerical settings file (default: {DEFAULT_CONFIG})"
    )
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")
    parser.add_argument("--debug", action="store_true", help="Enable debug logging and startup profiling")

    sub = parser.add_subparsers(dest="command", required=True)
    run_p = sub.add_parser("run", help="Run an experiment document")
    run_p.add_argument("experiment", help="Path to the experiment JSON file")
    run_p.add_argument("--output-dir", default=None, help="Override the document's output_dir")
    run_p.add_argument("--seed-override", type=int, default=None, help="Override the document's seed")
    run_p.add_argument("--threads", type=int, default=None, help="Worker threads (default: available CPUs)")

    val_p = sub.add_parser("validate", help="List problems in an experiment document without running it")
    val_p.add_argument("experiment", help="Path to the experiment JSON file")
    return parser


def _cell(value) -> object:
    if isinstance(value, bool) or value is None:
        return format_verdict(value, label=None if value is None else str(value).lower())
    if isinstance(value, float):
        return format_estimate(value)
    return str(value)


def print_summary(console: Console, manifest) -> None:
    """Rich table of the run summary and the emitted files."""
    table = Table(show_header=True, header_style="bold magenta", title=f"{manifest.config['kind']} run")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value")
    for key, value in manifest.summary.items():
        table.add_row(key, _cell(value))
    table.add_row("truncated", format_verdict(not manifest.truncated, "yes" if manifest.truncated else "no"))
    table.add_row("wall time", format_seconds(manifest.wall_time))
    console.print(table)

    files = Table(show_header=True, header_style="bold magenta", show_lines=False)
    files.add_column("File", style="green")
    files.add_column("sha256", style="dim")
    for f in manifest.files:
        files.add_row(f.path, f.sha256[:16])
    console.print(files)
    for err in manifest.errors:
        console.print(f"[red]Error:[/red] {err}")
    console.print(f"Results in [bold]{manifest.run_dir}[/bold]")


def cmd_validate(console: Console, path: str) -> int:
    from experiments.runner import validate_file

    diagnostics = validate_file(path)
    if not diagnostics:
        console.print(f"[green]{path}: no problems found[/green]")
        return 0
    for d in diagnostics:
        style = "red" if d.is_error else "yellow"
        console.print(f"[{style}]{d.level}[/{style}] {d.key}: {d.message}")
    return 2 if any(d.is_error for d in diagnostics) else 0


def cmd_run(console: Console, args) -> int:
    from experiments.runner import run_file

    manifest = run_file(args.experiment, args.output_dir, args.seed_override, args.threads)
    print_summary(console, manifest)
    return manifest.exit_code


def main(argv=None) -> int:
    """Main entry point."""
    _mark("main() start")
    parser = build_parser()
    args = parser.parse_args(argv)

    log_level = logging.DEBUG if args.debug else logging.INFO
    setup_logging(level=log_level)
    setup_exception_logging()
    logger = logging.getLogger(f"{LOGGER_PREFIX}.main")

    from utils.settings import use_settings

    if not Path(args.config).exists():
        logger.warning(f"Settings file '{args.config}' not found. Using defaults.")
    use_settings(args.config)
    console = Console()

    try:
        logger.info(f"========== {APP_NAME} {APP_VERSION}: {args.command} {args.experiment} ==========")
        if args.command == "validate":
            return cmd_validate(console, args.experiment)
        return cmd_run(console, args)
    except LabError as e:
        key = getattr(e, "key", None)
        console.print(f"[red]Error:[/red] {e}" + (f" (key: {key})" if key else ""))
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except KeyboardInterrupt:
        print("\nExiting...")
        logger.info("Run stopped by user")
        return 130
    except Exception as e:
        print(f"Error: {e}")
        logger.critical(f"Fatal error: {e}", exc_info=True)
        return 1
    finally:
        if _debug_mode and _startup_marks:
            _mark("Shutdown")
            print("\n[STARTUP PROFILE SUMMARY]")
            for label, elapsed in _startup_marks.items():
                print(f"  {label}: {elapsed:.1f}ms")


if __name__ == "__main__":
    sys.exit(main())
