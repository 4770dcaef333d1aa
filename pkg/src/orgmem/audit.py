"""Append-only audit log: one JSON record per line.

Every inbound event, outbound action, provider-bound payload, commit, and
notable decision lands here, in order, before delivery. The log is the sole
input to usage statistics and to the privacy and approval-gate checks, so
records carry enough to reconstruct those facts and nothing secret beyond
what the named subsystem already saw.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

from .events import Action, ChatEvent


class AuditLog:
    """In-memory record list, mirrored to a JSONL file when a path is set.

    Timestamps are supplied by the caller (the gateway uses the triggering
    event's timestamp) so replays are byte-identical.
    """

    def __init__(self, path: Path | str | None = None):
        self.path = Path(path) if path else None
        self.records: list[dict] = []
        self._lock = threading.Lock()
        if self.path:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_text("", encoding="utf-8")

    def record(self, kind: str, ts: str, **data) -> dict:
        entry = {"seq": len(self.records), "ts": ts, "kind": kind, **data}
        with self._lock:
            self.records.append(entry)
            if self.path:
                with self.path.open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps(entry, ensure_ascii=False) + "\n")
        return entry

    def record_event(self, event: ChatEvent) -> dict:
        return self.record("event", event.ts, event=event.to_json())

    def record_action(self, action: Action, ts: str) -> dict:
        return self.record("action", ts, action=action.to_json())


def read_audit(path: Path | str) -> list[dict]:
    """Load audit records from a JSONL file."""
    records = []
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except ValueError as exc:
                raise ValueError(f"corrupt audit record at line {lineno}: {exc}") from exc
    return records
