"""
Result Store - files emitted by one experiment run.

Everything lands in a single run directory:
- JSON results (sorted keys, indent 2, 17 significant digits)
- CSV tables
- SVG plots registered after the plotting backend wrote them
- manifest.json listing every file with its sha256 digest
"""

import csv
import hashlib
import io
import json
import threading
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence, Union

from models.experiment import OutputFile, RunManifest
from utils.formatters import format_float, round_floats
from utils.logger import get_logger

logger = get_logger("result_store")

MANIFEST_NAME = "manifest.json"


def file_digest(path: Union[str, Path]) -> str:
    """sha256 of a file's bytes."""
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(65536), b""):
            h.update(block)
    return h.hexdigest()


def _cell(value: Any) -> str:
    if isinstance(value, bool) or value is None:
        return "" if value is None else str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if hasattr(value, "item"):
        return _cell(value.item())
    return str(value)


class ResultStore:
    """
    Thread-safe writer for one run directory.

    Usage:
        store = ResultStore(run_dir)
        store.write_json("sieve.json", result.to_dict())
        store.write_csv("bad_squares.csv", ["n", "k"], rows)
        store.write_manifest(manifest)
    """

    def __init__(self, run_dir: Union[str, Path]):
        self.run_dir = Path(run_dir)
        self._lock = threading.RLock()
        self._files: List[str] = []
        self.run_dir.mkdir(parents=True, exist_ok=True)

    # =========================================================================
    # File I/O
    # =========================================================================

    def _write_bytes(self, name: str, data: bytes) -> Path:
        """Atomic write: temp file in the run directory, then rename."""
        with self._lock:
            path = self.run_dir / name
            path.parent.mkdir(parents=True, exist_ok=True)
            tmp_path = path.with_name(path.name + ".tmp")
            with open(tmp_path, "wb") as f:
                f.write(data)
            tmp_path.replace(path)
            self._register(name)
            logger.debug(f"Wrote {path} ({len(data)} bytes)")
            return path

    def _register(self, name: str) -> None:
        if name not in self._files:
            self._files.append(name)

    def write_json(self, name: str, data: Any) -> Path:
        text = json.dumps(round_floats(data), indent=2, sort_keys=True, ensure_ascii=False)
        return self._write_bytes(name, (text + "\n").encode("utf-8"))

    def write_csv(self, name: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(list(header))
        for row in rows:
            writer.writerow([_cell(v) for v in row])
        return self._write_bytes(name, buf.getvalue().encode("utf-8"))

    def add_file(self, path: Union[str, Path]) -> str:
        """Register a file another writer produced inside the run directory."""
        name = Path(path).resolve().relative_to(self.run_dir.resolve()).as_posix()
        with self._lock:
            self._register(name)
        return name

    def path(self, name: str) -> Path:
        return self.run_dir / name

    # =========================================================================
    # Manifest
    # =========================================================================

    def outputs(self) -> List[OutputFile]:
        """Registered files in name order with their digests."""
        with self._lock:
            names = sorted(self._files)
        return [
            OutputFile(path=n, sha256=file_digest(self.run_dir / n), size=(self.run_dir / n).stat().st_size)
            for n in names
        ]

    def write_manifest(self, manifest: RunManifest, name: Optional[str] = None) -> Path:
        """Write the manifest; it is not part of its own file list."""
        name = name or MANIFEST_NAME
        text = json.dumps(round_floats(manifest.to_dict()), indent=2, sort_keys=True, ensure_ascii=False)
        with self._lock:
            path = self.run_dir / name
            tmp_path = path.with_name(path.name + ".tmp")
            with open(tmp_path, "w", encoding="utf-8") as f:
                f.write(text + "\n")
            tmp_path.replace(path)
        logger.info(f"Manifest written to {path}")
        return path

    @staticmethod
    def load_manifest(path: Union[str, Path]) -> dict:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
