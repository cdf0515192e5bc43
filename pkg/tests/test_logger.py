"""Tests for the lab logger: handlers, formatters and per-run adapters."""

import json
import logging
import os
import re
import shutil
import sys
import tempfile
import unittest
from logging.handlers import RotatingFileHandler
from unittest.mock import patch

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

import pytest

from const import LOGGER_PREFIX
from utils.logger import (
    RunLogger,
    _make_formatter,
    _make_handler,
    get_logger,
    get_run_logger,
    setup_exception_logging,
    setup_logging,
)


def flush_lab_handlers():
    for handler in logging.getLogger(LOGGER_PREFIX).handlers:
        handler.flush()


def make_record(msg="m", **extra):
    record = logging.LogRecord("sle_lab.test", logging.INFO, __file__, 1, msg, None, None)
    for key, value in extra.items():
        setattr(record, key, value)
    return record


class TestMakeHandler(unittest.TestCase):
    """LOG_DEST picks the handler."""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_stream_destinations(self):
        out = _make_handler("unused.log", "stdout")
        err = _make_handler("unused.log", "stderr")
        self.assertIs(out.stream, sys.stdout)
        self.assertIs(err.stream, sys.stderr)
        self.assertNotIsInstance(out, RotatingFileHandler)

    def test_file_handler_rotates(self):
        handler = _make_handler(os.path.join(self.temp_dir, "lab.log"), "file")
        try:
            self.assertIsInstance(handler, RotatingFileHandler)
            self.assertEqual(handler.maxBytes, 1024 * 1024)
            self.assertEqual(handler.backupCount, 10)
        finally:
            handler.close()

    def test_creates_run_directory(self):
        log_file = os.path.join(self.temp_dir, "runs", "hitting-abc", "sle_lab.log")
        handler = _make_handler(log_file, "file")
        handler.close()
        self.assertTrue(os.path.isdir(os.path.dirname(log_file)))

    def test_unwritable_location_exits_with_hint(self):
        with patch("utils.logger.RotatingFileHandler", side_effect=PermissionError(13, "Permission denied")):
            with patch("sys.stderr") as stderr:
                with pytest.raises(SystemExit) as exc:
                    _make_handler(os.path.join(self.temp_dir, "lab.log"), "file")
        self.assertEqual(exc.value.code, 1)
        printed = "".join(str(c.args[0]) for c in stderr.write.call_args_list)
        self.assertIn("LOG_FILE=<output_dir>/sle_lab.log", printed)
        self.assertIn("LOG_DEST=stdout", printed)
        self.assertNotIn("chown", printed)


class TestMakeFormatter(unittest.TestCase):
    """LOG_FORMAT picks text or JSON records."""

    def test_text_format(self):
        formatter = _make_formatter("text")
        line = formatter.format(make_record("sieve done"))
        self.assertRegex(line, r"^\d{4}-\d{2}-\d{2} \d{2}:\d{2}:\d{2} - INFO - \[sle_lab\.test\] - sieve done$")

    def test_unknown_format_is_text(self):
        self.assertEqual(type(_make_formatter("yaml")), logging.Formatter)

    def test_json_carries_run_fields(self):
        formatter = _make_formatter("json")
        record = json.loads(formatter.format(make_record("hits counted", run="hitting-1", seed=5)))
        self.assertEqual(record["message"], "hits counted")
        self.assertEqual(record["name"], "sle_lab.test")
        self.assertEqual(record["run"], "hitting-1")
        self.assertEqual(record["seed"], 5)
        self.assertIn("timestamp", record)


class TestSetupLogging(unittest.TestCase):
    """setup_logging wires one handler onto the sle_lab logger."""

    def setUp(self):
        self.temp_dir = tempfile.mkdtemp()
        self.log_file = os.path.join(self.temp_dir, "sle_lab.log")

    def tearDown(self):
        logger = logging.getLogger(LOGGER_PREFIX)
        for handler in logger.handlers:
            handler.close()
        logger.handlers.clear()
        shutil.rmtree(self.temp_dir, ignore_errors=True)

    def test_single_handler_no_propagation(self):
        logger = logging.getLogger(LOGGER_PREFIX)
        logger.addHandler(logging.NullHandler())
        with patch.dict(os.environ, {"LOG_DEST": "file"}):
            setup_logging(self.log_file, level=logging.DEBUG)
        self.assertEqual(len(logger.handlers), 1)
        self.assertEqual(logger.level, logging.DEBUG)
        self.assertFalse(logger.propagate)

    def test_module_loggers_reach_file(self):
        with patch.dict(os.environ, {"LOG_DEST": "file"}):
            setup_logging(self.log_file)
        get_logger("sieve").info("classified 62 squares")
        get_logger("sieve").debug("hidden at INFO")
        flush_lab_handlers()
        with open(self.log_file, encoding="utf-8") as f:
            content = f.read()
        self.assertIn("[sle_lab.sieve] - classified 62 squares", content)
        self.assertNotIn("hidden at INFO", content)

    def test_log_file_from_environment(self):
        run_log = os.path.join(self.temp_dir, "runs", "spectrum-1", "sle_lab.log")
        with patch.dict(os.environ, {"LOG_DEST": "file", "LOG_FILE": run_log}):
            setup_logging(self.log_file)
        get_logger("spectrum").info("beta fitted")
        flush_lab_handlers()
        self.assertTrue(os.path.exists(run_log))
        self.assertFalse(os.path.exists(self.log_file))

    def test_run_logger_json_record(self):
        with patch.dict(os.environ, {"LOG_FORMAT": "json", "LOG_DEST": "file"}):
            setup_logging(self.log_file)
        get_run_logger("experiments", "sieve-abc", seed=7).info("json message")
        flush_lab_handlers()
        with open(self.log_file, encoding="utf-8") as f:
            record = json.loads(f.readline())
        self.assertEqual(record["message"], "[sieve-abc] json message")
        self.assertEqual(record["run"], "sieve-abc")
        self.assertEqual(record["seed"], 7)


class TestRunLogger(unittest.TestCase):
    """Per-run adapter."""

    def test_prefixes_run_name(self):
        log = get_run_logger("run_test", "hitting-0123456789ab", seed=3)
        msg, kwargs = log.process("started", {})
        self.assertEqual(msg, "[hitting-0123456789ab] started")
        self.assertEqual(kwargs["extra"], {"run": "hitting-0123456789ab", "seed": 3})

    def test_call_extra_merged_but_run_kept(self):
        log = get_run_logger("run_test", "dkappa-x")
        _, kwargs = log.process("msg", {"extra": {"step": 4}})
        self.assertEqual(kwargs["extra"]["step"], 4)
        self.assertEqual(kwargs["extra"]["run"], "dkappa-x")
        self.assertIsNone(kwargs["extra"]["seed"])

    def test_wraps_prefixed_logger(self):
        log = get_run_logger("wrapped", "r")
        self.assertIsInstance(log, RunLogger)
        self.assertIs(log.logger, get_logger("wrapped"))
        self.assertEqual(log.logger.name, "sle_lab.wrapped")

    def test_text_output_has_prefix(self):
        log = get_run_logger("adapter", "frostman-9", seed=1)
        with self.assertLogs("sle_lab.adapter", level="INFO") as captured:
            log.info("ratios ready")
        self.assertEqual(captured.records[0].getMessage(), "[frostman-9] ratios ready")
        self.assertEqual(captured.records[0].run, "frostman-9")
        self.assertTrue(re.match(r"INFO:sle_lab\.adapter:", captured.output[0]))


class TestExceptionHook(unittest.TestCase):

    def setUp(self):
        self.original = sys.excepthook

    def tearDown(self):
        sys.excepthook = self.original

    def test_uncaught_errors_logged(self):
        setup_exception_logging()
        with self.assertLogs("sle_lab.exception_handler", level="ERROR") as captured:
            sys.excepthook(ValueError, ValueError("bad kappa"), None)
        self.assertIn("Uncaught exception", captured.output[0])

    def test_keyboard_interrupt_passed_through(self):
        setup_exception_logging()
        with patch.object(sys, "__excepthook__") as hook:
            sys.excepthook(KeyboardInterrupt, KeyboardInterrupt(), None)
        hook.assert_called_once()


if __name__ == '__main__':
    unittest.main()
