"""Tests for ResultStore - files of one experiment run."""

import hashlib
import json
import os
import sys
import tempfile
import unittest
from pathlib import Path

sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from models.experiment import RunManifest
from storage.result_store import MANIFEST_NAME, ResultStore, file_digest


class TestResultStore(unittest.TestCase):
    """Tests for writing files into a run directory."""

    def setUp(self):
        self.temp_dir = tempfile.TemporaryDirectory()
        self.store = ResultStore(Path(self.temp_dir.name) / 'run')

    def tearDown(self):
        self.temp_dir.cleanup()

    def test_creates_run_dir(self):
        self.assertTrue(self.store.run_dir.is_dir())

    def test_json_sorted_with_string_non_finite(self):
        path = self.store.write_json('result.json', {'b': float('nan'), 'a': 0.1 + 0.2})
        text = path.read_text(encoding='utf-8')
        self.assertLess(text.index('"a"'), text.index('"b"'))
        data = json.loads(text)
        self.assertEqual(data['b'], 'nan')
        self.assertEqual(data['a'], 0.1 + 0.2)

    def test_csv_cells(self):
        path = self.store.write_csv('table.csv', ['n', 'value', 'flag', 'note'], [[3, 0.1, True, None]])
        lines = path.read_text(encoding='utf-8').splitlines()
        self.assertEqual(lines[0], 'n,value,flag,note')
        self.assertEqual(lines[1], '3,0.10000000000000001,1,')

    def test_no_temp_files_left(self):
        self.store.write_json('a.json', {})
        self.assertEqual([p.name for p in self.store.run_dir.iterdir()], ['a.json'])

    def test_outputs_sorted_with_digests(self):
        self.store.write_json('z.json', {'x': 1})
        self.store.write_csv('a.csv', ['x'], [[1]])
        outputs = self.store.outputs()
        self.assertEqual([o.path for o in outputs], ['a.csv', 'z.json'])
        expected = hashlib.sha256((self.store.run_dir / 'z.json').read_bytes()).hexdigest()
        self.assertEqual(outputs[1].sha256, expected)
        self.assertEqual(file_digest(self.store.run_dir / 'z.json'), expected)

    def test_rewrite_registers_once(self):
        self.store.write_json('a.json', {'x': 1})
        self.store.write_json('a.json', {'x': 2})
        self.assertEqual(len(self.store.outputs()), 1)

    def test_add_external_file(self):
        path = self.store.path('plots/fig.svg')
        path.parent.mkdir(parents=True)
        path.write_text('<svg/>')
        self.assertEqual(self.store.add_file(path), 'plots/fig.svg')
        self.assertEqual([o.path for o in self.store.outputs()], ['plots/fig.svg'])

    def test_add_file_outside_run_dir(self):
        with self.assertRaises(ValueError):
            self.store.add_file(Path(self.temp_dir.name) / 'elsewhere.txt')

    def test_manifest_not_in_its_own_list(self):
        self.store.write_json('a.json', {})
        manifest = RunManifest(config={'kind': 'dkappa'}, version='0.0.0', run_dir=str(self.store.run_dir))
        manifest.files = self.store.outputs()
        path = self.store.write_manifest(manifest)
        self.assertEqual(path.name, MANIFEST_NAME)
        loaded = ResultStore.load_manifest(path)
        self.assertEqual([f['path'] for f in loaded['files']], ['a.json'])
        self.assertEqual([o.path for o in self.store.outputs()], ['a.json'])


if __name__ == '__main__':
    unittest.main()
