"""Embedded persistence: content-addressed blobs plus a record log.

The repository is an append-only JSONL log with an in-memory last-wins
index per table, rebuilt by replay on startup. It sits behind the
gateway's repository boundary, so a relational store can replace it
without touching the service layer.
"""

from __future__ import annotations

import hashlib
import json
import threading
from pathlib import Path

from paddydx.errors import NotFound


class BlobStore:
    """Files keyed by lowercase hex SHA-256 of their content."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, digest: str) -> Path:
        return self.root / digest

    def put(self, data: bytes) -> str:
        digest = hashlib.sha256(data).hexdigest()
        path = self._path(digest)
        if not path.exists():
            tmp = path.with_suffix(".tmp")
            tmp.write_bytes(data)
            tmp.rename(path)
        return digest

    def get(self, digest: str) -> bytes:
        path = self._path(digest)
        if not path.exists():
            raise NotFound(f"no blob with digest {digest}")
        return path.read_bytes()

    def exists(self, digest: str) -> bool:
        return self._path(digest).exists()


class Repository:
    """Keyed tables plus an append-only list table for outbreak reports."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._lock = threading.Lock()
        self._tables: dict[str, dict[str, dict]] = {}
        self._lists: dict[str, list[dict]] = {}
        if self.path.exists():
            with open(self.path, encoding="utf-8") as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    rec = json.loads(line)
                    self._apply(rec)
        self._fh = open(self.path, "a", encoding="utf-8")

    def _apply(self, rec: dict) -> None:
        if rec["op"] == "put":
            self._tables.setdefault(rec["table"], {})[rec["key"]] = rec["doc"]
        elif rec["op"] == "append":
            self._lists.setdefault(rec["table"], []).append(rec["doc"])

    def _write(self, rec: dict) -> None:
        self._fh.write(json.dumps(rec, separators=(",", ":")) + "\n")
        self._fh.flush()

    def put(self, table: str, key: str, doc: dict) -> None:
        with self._lock:
            rec = {"op": "put", "table": table, "key": key, "doc": doc}
            self._apply(rec)
            self._write(rec)

    def get(self, table: str, key: str) -> dict | None:
        with self._lock:
            doc = self._tables.get(table, {}).get(key)
            return dict(doc) if doc is not None else None

    def all(self, table: str) -> list[dict]:
        with self._lock:
            return [dict(d) for d in self._tables.get(table, {}).values()]

    def append(self, table: str, doc: dict) -> None:
        with self._lock:
            rec = {"op": "append", "table": table, "doc": doc}
            self._apply(rec)
            self._write(rec)

    def items(self, table: str) -> list[dict]:
        with self._lock:
            return [dict(d) for d in self._lists.get(table, [])]

    def close(self) -> None:
        with self._lock:
            self._fh.close()
