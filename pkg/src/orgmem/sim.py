"""Simulated in-memory adapter: drives the gateway from code or from a
transcript file (one ChatEvent JSON per line) and captures every delivered
action. Tests and the replay command run on this adapter."""

from __future__ import annotations

import json
from pathlib import Path

from .events import Action, ChatEvent
from .gateway import Gateway


class TranscriptError(Exception):
    def __init__(self, message: str, line: int):
        super().__init__(f"{message} (transcript line {line})")
        self.line = line


class SimulatedAdapter:
    """Feeds events to a gateway and records the actions it emits."""

    def __init__(self, gateway: Gateway):
        self.gateway = gateway
        self.delivered: list[Action] = []

    def feed(self, event: ChatEvent) -> list[Action]:
        actions = self.gateway.ingest(event)
        self.delivered.extend(actions)
        return actions

    def feed_json(self, data: dict) -> list[Action]:
        actions = self.gateway.ingest_json(data)
        self.delivered.extend(actions)
        return actions


def read_transcript(path: Path | str) -> list[ChatEvent]:
    """Parse a replay transcript, reporting bad lines by number."""
    events = []
    with Path(path).open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                events.append(ChatEvent.from_json(json.loads(line)))
            except (ValueError, KeyError, TypeError) as exc:
                raise TranscriptError(f"malformed event: {exc}", lineno) from exc
    return events


def replay_transcript(path: Path | str, gateway: Gateway) -> SimulatedAdapter:
    """Feed every transcript event through a simulated adapter, in order."""
    adapter = SimulatedAdapter(gateway)
    for event in read_transcript(path):
        adapter.feed(event)
    return adapter
