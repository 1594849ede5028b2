"""Append-only event journal with periodic full-state snapshots.

One NDJSON line per committed mutation: event kind, UTC timestamp, and a
digest of the payload. Recovery loads the newest snapshot (if any) and
replays the journal tail through the same appliers that handled the live
events.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path


def payload_digest(data):
    canonical = json.dumps(data, sort_keys=True, ensure_ascii=False, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class Journal:
    def __init__(self, path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = None
        self._count = self._count_existing()

    def _count_existing(self):
        if not self.path.exists():
            return 0
        with self.path.open("rb") as fh:
            return sum(1 for line in fh if line.strip())

    @property
    def count(self):
        return self._count

    def append(self, kind, timestamp, data):
        if self._fh is None:
            self._fh = self.path.open("a", encoding="utf-8")
        event = {"event": kind, "ts": timestamp, "digest": payload_digest(data), "data": data}
        self._fh.write(json.dumps(event, ensure_ascii=False) + "\n")
        self._fh.flush()
        os.fsync(self._fh.fileno())
        self._count += 1
        return event

    def replay(self, start=0):
        """Yield (kind, data) for events from index `start`; tolerates a torn final line."""
        if not self.path.exists():
            return
        with self.path.open("r", encoding="utf-8") as fh:
            for index, line in enumerate(stripped for stripped in (l.strip() for l in fh) if stripped):
                if index < start:
                    continue
                try:
                    event = json.loads(line)
                except json.JSONDecodeError:
                    break  # torn tail write from a crash; everything before it is durable
                yield event["event"], event["data"]

    def close(self):
        if self._fh is not None:
            self._fh.close()
            self._fh = None


class SnapshotStore:
    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def latest(self):
        """Return (journal_offset, state) of the newest readable snapshot."""
        candidates = sorted(self.directory.glob("snap-*.json"), reverse=True)
        for path in candidates:
            try:
                doc = json.loads(path.read_text(encoding="utf-8"))
                return doc["journal_offset"], doc["state"]
            except (json.JSONDecodeError, KeyError):
                continue  # partially written snapshot: fall back to the previous one
        return 0, None

    def write(self, journal_offset, state):
        path = self.directory / f"snap-{journal_offset:010d}.json"
        tmp = path.with_suffix(".tmp")
        tmp.write_text(
            json.dumps({"journal_offset": journal_offset, "state": state}, ensure_ascii=False),
            encoding="utf-8",
        )
        tmp.replace(path)
        return path
