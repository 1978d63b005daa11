"""Token-addressed session persistence: one JSON snapshot file per token.

Saves are atomic (write to a temp file, then rename into place), so a crash
mid-write leaves the previous snapshot intact.  Lookups never reveal whether
a token once existed: a deleted session and a never-created one fail
identically.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

from .session import Session, session_from_json, session_to_json
from .tokens import is_token


class StoreError(Exception):
    pass


class UnknownTokenError(StoreError):
    """Same message for never-existed and deleted tokens: no guessing oracle."""

    def __init__(self) -> None:
        super().__init__("unknown token")


@dataclass(frozen=True)
class StoredSession:
    session: Session
    last_modified: datetime


class SessionStore:
    """Filesystem-backed store; mutations on one token are serialized."""

    def __init__(self, root: Path | str):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def lock_for(self, token: str) -> threading.Lock:
        """Per-token mutual exclusion; callers wrap read-modify-write cycles."""
        with self._locks_guard:
            lock = self._locks.get(token)
            if lock is None:
                lock = threading.Lock()
                self._locks[token] = lock
            return lock

    def _path(self, token: str) -> Path:
        # The shape check doubles as path-traversal protection.
        if not is_token(token):
            raise UnknownTokenError()
        return self.root / f"{token}.json"

    def save(self, session: Session) -> None:
        path = self._path(session.token)
        snapshot = session_to_json(session)
        snapshot["last_modified"] = datetime.now(timezone.utc).isoformat()
        payload = json.dumps(snapshot, sort_keys=True, separators=(",", ":")) + "\n"
        fd, tmp_name = tempfile.mkstemp(dir=self.root, prefix=f".{session.token}.", suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                handle.write(payload)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp_name, path)
        except BaseException:
            try:
                os.unlink(tmp_name)
            except OSError:
                pass
            raise

    def load(self, token: str) -> Session:
        return self.load_stored(token).session

    def load_stored(self, token: str) -> StoredSession:
        path = self._path(token)
        try:
            raw = path.read_text("utf-8")
        except FileNotFoundError:
            raise UnknownTokenError() from None
        data = json.loads(raw)
        return StoredSession(
            session=session_from_json(data),
            last_modified=datetime.fromisoformat(data["last_modified"]),
        )

    def delete(self, token: str) -> None:
        path = self._path(token)
        try:
            path.unlink()
        except FileNotFoundError:
            raise UnknownTokenError() from None
