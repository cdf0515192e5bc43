"""Tests for parallel and resources modules."""

import os
import threading
from unittest.mock import MagicMock, patch

import pytest

from errors import ResourceError
from utils.parallel import chunk_ranges, derive_seed, map_chunks, map_items
from utils.resources import check_allocation, default_threads


class TestDeriveSeed:
    """Tests for derive_seed function."""

    def test_deterministic(self):
        assert derive_seed(42, 3) == derive_seed(42, 3)

    def test_children_differ(self):
        seeds = {derive_seed(42, i) for i in range(100)}
        assert len(seeds) == 100

    def test_parent_matters(self):
        assert derive_seed(1, 0) != derive_seed(2, 0)


class TestChunks:
    """Tests for chunk_ranges, map_chunks and map_items."""

    def test_chunk_ranges(self):
        assert chunk_ranges(10, 4) == [(0, 4), (4, 8), (8, 10)]
        assert chunk_ranges(0, 4) == []

    def test_results_in_chunk_order(self):
        result = map_chunks(lambda a, b: list(range(a, b)), 10, 3, threads=4)
        assert result == [[0, 1, 2], [3, 4, 5], [6, 7, 8], [9]]

    def test_single_thread_runs_inline(self):
        seen = []
        map_chunks(lambda a, b: seen.append(threading.get_ident()), 6, 2, threads=1)
        assert set(seen) == {threading.get_ident()}

    def test_map_items_order(self):
        assert map_items(lambda x: x * x, [3, 1, 2], threads=3) == [9, 1, 4]


class TestResources:
    """Tests for default_threads and check_allocation."""

    def test_environment_override(self):
        with patch.dict(os.environ, {'SLE_LAB_THREADS': '3'}):
            assert default_threads() == 3

    def test_falls_back_to_cpu_count(self):
        with patch.dict(os.environ, {'SLE_LAB_THREADS': 'x'}), \
                patch('utils.resources.psutil.cpu_count', return_value=6):
            assert default_threads() == 6

    def test_within_limit(self):
        check_allocation(1024, "grid", limit=2048)

    def test_over_limit(self):
        with pytest.raises(ResourceError) as exc_info:
            check_allocation(4096, "grid", limit=2048)
        assert exc_info.value.details['budget'] == 2048

    def test_default_budget_uses_available_memory(self):
        memory = MagicMock(available=1000)
        with patch('utils.resources.psutil.virtual_memory', return_value=memory):
            with pytest.raises(ResourceError):
                check_allocation(600, "grid")
