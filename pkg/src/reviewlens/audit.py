"""Line-delimited audit log (one JSON record per line)."""

from __future__ import annotations

import json
import threading
from pathlib import Path


class AuditLog:
    def __init__(self, path: Path | str | None = None):
        self.path = Path(path) if path is not None else None
        self._memory: list[dict] = []
        self._lock = threading.Lock()

    def write(self, record: dict) -> None:
        line = json.dumps(record, ensure_ascii=False, sort_keys=True, default=str)
        with self._lock:
            self._memory.append(record)
            if self.path is not None:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with self.path.open("a", encoding="utf-8") as handle:
                    handle.write(line + "\n")

    @property
    def count(self) -> int:
        with self._lock:
            return len(self._memory)

    def records(self) -> list[dict]:
        with self._lock:
            return list(self._memory)
