"""Tests for settings module."""

import os
import tempfile
from unittest.mock import patch

import pytest

from utils import settings
from utils.settings import DEFAULT_SETTINGS, _merge, get_settings, load_settings, section, use_settings


@pytest.fixture(autouse=True)
def reset_settings():
    """Drop the process-wide cache around each test."""
    settings._cached = None
    yield
    settings._cached = None


@pytest.fixture
def config_file():
    fd, path = tempfile.mkstemp(suffix='.yaml')
    with os.fdopen(fd, 'w') as f:
        f.write("sieve:\n  n_max: 9\nthreads: 2\n")
    yield path
    os.unlink(path)


class TestMerge:
    """Tests for _merge function."""

    def test_nested_override(self):
        merged = _merge({'a': {'x': 1, 'y': 2}, 'b': 3}, {'a': {'y': 5}})
        assert merged == {'a': {'x': 1, 'y': 5}, 'b': 3}

    def test_base_untouched(self):
        base = {'a': {'x': 1}}
        _merge(base, {'a': {'x': 2}})
        assert base['a']['x'] == 1


class TestLoadSettings:
    """Tests for load_settings function."""

    def test_missing_file_gives_defaults(self):
        result = load_settings('/nonexistent/config.yaml')
        assert result['sieve']['n_max'] == DEFAULT_SETTINGS['sieve']['n_max']
        assert result['spectrum']['j_min'] == 4

    def test_file_overrides_defaults(self, config_file):
        result = load_settings(config_file)
        assert result['sieve']['n_max'] == 9
        assert result['sieve']['quadrature_order'] == 16
        assert result['threads'] == 2

    def test_environment_wins(self, config_file):
        with patch.dict(os.environ, {'SLE_LAB_N_MAX': '11', 'SLE_LAB_OUTPUT_DIR': '/tmp/runs'}):
            result = load_settings(config_file)
        assert result['sieve']['n_max'] == 11
        assert result['output_dir'] == '/tmp/runs'

    def test_bad_environment_value_ignored(self):
        with patch.dict(os.environ, {'SLE_LAB_THREADS': 'many'}):
            result = load_settings('/nonexistent/config.yaml')
        assert result['threads'] == 0


class TestCache:
    """Tests for get_settings, section and use_settings."""

    def test_loaded_once(self):
        with patch('utils.settings.load_settings', return_value={'sieve': {}}) as mock_load:
            get_settings()
            get_settings()
        assert mock_load.call_count == 1

    def test_use_settings_reloads(self, config_file):
        use_settings(config_file)
        assert section('sieve')['n_max'] == 9

    def test_unknown_section_is_empty(self):
        assert section('nonexistent') == {}
