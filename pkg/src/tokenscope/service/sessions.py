"""Session registry with append-only on-disk event logs.

Every mutation (turn appended, artifact stored, status change) is one JSON
line in data/sessions/<id>.log; replaying a log reconstructs the session
exactly, which is what the persistence tests assert byte-for-byte.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from ..episode import Turn
from ..errors import SessionBusyError, SessionNotFoundError

STATUSES = ("idle", "running", "failed")


@dataclass
class SessionRecord:
    session_id: str
    created_at: str
    turns: list[Turn] = field(default_factory=list)
    status: str = "idle"
    artifacts: dict = field(default_factory=dict)

    def transcript(self) -> dict:
        return {
            "session_id": self.session_id,
            "created_at": self.created_at,
            "status": self.status,
            "turns": [{"role": t.role, "content": t.content} for t in self.turns],
        }

    def summary(self) -> dict:
        return {
            "session_id": self.session_id,
            "created_at": self.created_at,
            "status": self.status,
            "turns": len(self.turns),
        }


class SessionStore:
    """In-memory registry backed by per-session append-only logs under
    root/sessions/. Existing logs are replayed at startup."""

    def __init__(self, root: str | Path | None = None):
        self._sessions: dict[str, SessionRecord] = {}
        self._lock = threading.Lock()
        self._root = Path(root) / "sessions" if root else None
        if self._root:
            self._root.mkdir(parents=True, exist_ok=True)
            for path in sorted(self._root.glob("*.log")):
                record = replay_log(path)
                if record:
                    self._sessions[record.session_id] = record

    def _log(self, session_id: str, event: dict) -> None:
        if not self._root:
            return
        line = json.dumps(event, sort_keys=True)
        with (self._root / f"{session_id}.log").open("a") as fh:
            fh.write(line + "\n")

    def create(self) -> SessionRecord:
        record = SessionRecord(
            session_id=uuid.uuid4().hex[:12],
            created_at=datetime.now(timezone.utc).isoformat(),
        )
        with self._lock:
            self._sessions[record.session_id] = record
        self._log(
            record.session_id,
            {"type": "created", "session_id": record.session_id, "created_at": record.created_at},
        )
        return record

    def get(self, session_id: str) -> SessionRecord:
        record = self._sessions.get(session_id)
        if record is None:
            raise SessionNotFoundError(f"no session {session_id!r}")
        return record

    def list_sessions(self) -> list[dict]:
        with self._lock:
            records = sorted(self._sessions.values(), key=lambda r: r.created_at)
        return [r.summary() for r in records]

    def begin_message(self, session_id: str) -> SessionRecord:
        """Transition idle -> running atomically; reject when busy."""
        with self._lock:
            record = self.get(session_id)
            if record.status == "running":
                raise SessionBusyError(f"session {session_id} is already processing a message")
            record.status = "running"
        return record

    def finish_message(self, session_id: str, failed: bool = False) -> None:
        with self._lock:
            record = self.get(session_id)
            record.status = "failed" if failed else "idle"

    def append_turn(self, session_id: str, role: str, content: str) -> None:
        record = self.get(session_id)
        record.turns.append(Turn(role, content))
        self._log(session_id, {"type": "turn", "role": role, "content": content})

    def add_artifact(self, session_id: str, ref: str, body: dict) -> None:
        record = self.get(session_id)
        record.artifacts[ref] = body
        self._log(session_id, {"type": "artifact", "ref": ref, "body": body})

    def artifact(self, session_id: str, ref: str) -> dict:
        record = self.get(session_id)
        if ref not in record.artifacts:
            raise SessionNotFoundError(f"no artifact {ref!r} in session {session_id}")
        return record.artifacts[ref]


def replay_log(path: str | Path) -> SessionRecord | None:
    """Rebuild a SessionRecord purely from its event log."""
    record: SessionRecord | None = None
    for line in Path(path).read_text().splitlines():
        if not line.strip():
            continue
        event = json.loads(line)
        kind = event.get("type")
        if kind == "created":
            record = SessionRecord(
                session_id=event["session_id"], created_at=event["created_at"]
            )
        elif record is None:
            continue
        elif kind == "turn":
            record.turns.append(Turn(event["role"], event["content"]))
        elif kind == "artifact":
            record.artifacts[event["ref"]] = event["body"]
    return record
