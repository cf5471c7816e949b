"""Append-only broker journal: length-prefixed JSON records.

Each record is a 4-byte big-endian length followed by a UTF-8 JSON
object. Ops: ``declare`` (durable queue exists), ``enqueue`` (payload
carried base64), ``ack`` (message settled), ``dead`` (message moved to
the dead-letter companion). Replaying the journal in order reconstructs
the durable queue contents.
"""

from __future__ import annotations

import base64
import json
import struct
from pathlib import Path
from typing import Iterator

_LEN = struct.Struct(">I")


class Journal:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "ab")

    def append(self, record: dict) -> None:
        blob = json.dumps(record, separators=(",", ":")).encode("utf-8")
        self._fh.write(_LEN.pack(len(blob)) + blob)
        self._fh.flush()

    def declare(self, queue: str) -> None:
        self.append({"op": "declare", "queue": queue})

    def enqueue(self, queue: str, message_id: str, payload: bytes, enqueued_at: float) -> None:
        self.append(
            {
                "op": "enqueue",
                "queue": queue,
                "message_id": message_id,
                "payload": base64.b64encode(payload).decode("ascii"),
                "enqueued_at": enqueued_at,
            }
        )

    def ack(self, queue: str, message_id: str) -> None:
        self.append({"op": "ack", "queue": queue, "message_id": message_id})

    def dead(self, queue: str, message_id: str) -> None:
        self.append({"op": "dead", "queue": queue, "message_id": message_id})

    def close(self) -> None:
        self._fh.close()


def replay(path: str | Path) -> Iterator[dict]:
    """Yield journal records in write order; tolerates a truncated tail."""
    path = Path(path)
    if not path.exists():
        return
    data = path.read_bytes()
    offset = 0
    while offset + _LEN.size <= len(data):
        (length,) = _LEN.unpack_from(data, offset)
        offset += _LEN.size
        if offset + length > len(data):
            break  # torn final record from a crash mid-write
        yield json.loads(data[offset : offset + length].decode("utf-8"))
        offset += length
