"""File-system store for logged bindings, one directory per decision."""

from __future__ import annotations

import hashlib
import os
import tempfile
import threading
from pathlib import Path
from urllib.parse import quote

BINDINGS_FILE = "bindings.csv"


class DecisionStore:
    """Bindings keyed by ``(app, decision_id)``.

    Writes go to a temporary file in the target directory and are renamed into
    place, so a reader sees either the previous body or the complete new one.
    Writes to the same key are serialized; reads take no locks.
    """

    def __init__(self, root: str | Path) -> None:
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[tuple[str, str], threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _path(self, app: str, decision_id: str) -> Path:
        return self.root / quote(app, safe="") / quote(decision_id, safe="") / BINDINGS_FILE

    def _lock(self, key: tuple[str, str]) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(key, threading.Lock())

    def write(self, app: str, decision_id: str, body: bytes) -> tuple[str, str]:
        """Store ``body``; returns ``(status, sha256)`` with status created/updated/unchanged."""
        digest = hashlib.sha256(body).hexdigest()
        path = self._path(app, decision_id)
        with self._lock((app, decision_id)):
            previous = self.read(app, decision_id)
            if previous == body:
                return "unchanged", digest
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".bindings-", suffix=".tmp")
            try:
                with os.fdopen(fd, "wb") as fh:
                    fh.write(body)
                    fh.flush()
                    os.fsync(fh.fileno())
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
        return ("created" if previous is None else "updated"), digest

    def read(self, app: str, decision_id: str) -> bytes | None:
        try:
            return self._path(app, decision_id).read_bytes()
        except FileNotFoundError:
            return None

    def decisions(self, app: str) -> list[str]:
        from urllib.parse import unquote

        base = self.root / quote(app, safe="")
        if not base.is_dir():
            return []
        return sorted(unquote(p.name) for p in base.iterdir() if (p / BINDINGS_FILE).is_file())
