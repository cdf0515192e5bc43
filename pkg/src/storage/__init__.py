"""Result files and run manifests."""

from storage.result_store import ResultStore, file_digest

__all__ = ["ResultStore", "file_digest"]
