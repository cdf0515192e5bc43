"""Logging configuration for the lab."""

import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from typing import Any, MutableMapping, Optional, Tuple

from const import LOG_FILE, LOGGER_PREFIX

TEXT_FORMAT = "%(asctime)s - %(levelname)s - [%(name)s] - %(message)s"
JSON_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"


def _make_handler(log_file: str, log_dest: str) -> logging.Handler:
    """Stream handler for LOG_DEST=stdout/stderr, rotating file handler otherwise."""
    if log_dest == "stdout":
        return logging.StreamHandler(sys.stdout)
    if log_dest == "stderr":
        return logging.StreamHandler(sys.stderr)
    try:
        os.makedirs(os.path.dirname(os.path.abspath(log_file)), exist_ok=True)
        return RotatingFileHandler(log_file, maxBytes=1 * 1024 * 1024, backupCount=10, encoding="utf-8")  # 1 MB
    except OSError as e:
        print(
            f"\n\033[1;31mError:\033[0m Cannot write to log file: {log_file} ({e.strerror})\n"
            f"\n"
            f"\033[1mSolutions:\033[0m\n"
            f"  1. Log next to the run:  \033[32mLOG_FILE=<output_dir>/sle_lab.log python src/main.py run ...\033[0m\n"
            f"  2. Use stdout:           \033[32mLOG_DEST=stdout python src/main.py run ...\033[0m\n",
            file=sys.stderr,
        )
        sys.exit(1)


def _make_formatter(log_format: str) -> logging.Formatter:
    """JSON records (run and seed become fields) for LOG_FORMAT=json, plain text otherwise."""
    if log_format == "json":
        try:
            from pythonjsonlogger import jsonlogger

            return jsonlogger.JsonFormatter(JSON_FORMAT, timestamp=True)
        except ImportError:
            pass
    return logging.Formatter(TEXT_FORMAT, datefmt="%Y-%m-%d %H:%M:%S")


def setup_logging(log_file: str = LOG_FILE, level: int = logging.INFO) -> None:
    """
    Configure the lab logger.

    Args:
        log_file: Path to the log file; LOG_FILE in the environment takes precedence.
        level: Logging level (default: logging.INFO).
    """
    logger = logging.getLogger(LOGGER_PREFIX)
    logger.setLevel(level)

    handler = _make_handler(os.getenv("LOG_FILE") or log_file, os.getenv("LOG_DEST", "file").lower())
    handler.setFormatter(_make_formatter(os.getenv("LOG_FORMAT", "text").lower()))

    # Remove existing handlers to avoid duplicates
    if logger.hasHandlers():
        logger.handlers.clear()

    logger.addHandler(handler)
    logger.propagate = False


def setup_exception_logging():
    """
    Set up a global exception hook to log uncaught exceptions.
    """
    logger = get_logger("exception_handler")

    def handle_exception(exc_type, exc_value, exc_traceback):
        if issubclass(exc_type, KeyboardInterrupt):
            sys.__excepthook__(exc_type, exc_value, exc_traceback)
            return

        logger.error("Uncaught exception", exc_info=(exc_type, exc_value, exc_traceback))

    sys.excepthook = handle_exception


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance with the app prefix."""
    return logging.getLogger(f"{LOGGER_PREFIX}.{name}")


class RunLogger(logging.LoggerAdapter):
    """Prefixes messages with the run name and attaches run/seed as record fields."""

    def process(self, msg: Any, kwargs: MutableMapping[str, Any]) -> Tuple[Any, MutableMapping[str, Any]]:
        kwargs["extra"] = {**self.extra, **(kwargs.get("extra") or {})}
        return f"[{self.extra['run']}] {msg}", kwargs


def get_run_logger(name: str, run: str, seed: Optional[int] = None) -> RunLogger:
    """Logger for one experiment run."""
    return RunLogger(get_logger(name), {"run": run, "seed": seed})
