"""Append-only JSON-lines cache so every provider response can be replayed."""
from __future__ import annotations

import hashlib
import json
import threading
from pathlib import Path


def cache_key(kind: str, model: str, prompt) -> str:
    payload = json.dumps({"kind": kind, "model": model, "prompt": prompt},
                         sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


class ResponseCache:
    """One record per line: {key_hash, kind, prompt, response, logprobs?,
    embedding?, timestamp}. Concurrent readers are fine; appends are guarded
    by a lock so a single process keeps writer discipline."""

    def __init__(self, path: str | Path | None):
        self.path = Path(path) if path else None
        self._lock = threading.Lock()
        self._records: dict[str, dict] = {}
        if self.path and self.path.exists():
            with open(self.path) as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    rec = json.loads(line)
                    self._records[rec["key_hash"]] = rec

    def __len__(self) -> int:
        return len(self._records)

    def get(self, key_hash: str) -> dict | None:
        return self._records.get(key_hash)

    def put(self, record: dict) -> None:
        key = record["key_hash"]
        with self._lock:
            if key in self._records:
                return
            self._records[key] = record
            if self.path:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.path, "a") as fh:
                    fh.write(json.dumps(record, sort_keys=True) + "\n")
