"""Workspace wiring and durable state.

``Workspace`` bundles the collaborators every pipeline needs (store,
retriever, provider, roster, config, audit, state). ``WorkspaceState``
holds everything that must survive a restart: exchanges, drafts, pending
sessions, relay routes, share bookkeeping, conversation history, and the
set of already-processed event ids.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .audit import AuditLog
from .config import WorkspaceConfig
from .docstore import RepoStore
from .extraction import SuggestionDraft
from .provider import MockProvider, PromptTemplates, RecordingProvider, RemoteProfile, RemoteProvider
from .qa import QAExchange
from .remote_sync import NullRemoteSync
from .retrieval import Retriever
from .update_flow import UpdateSession


@dataclass
class WorkspaceState:
    exchanges: dict[str, QAExchange] = field(default_factory=dict)
    drafts: dict[str, SuggestionDraft] = field(default_factory=dict)
    sessions: dict[str, UpdateSession] = field(default_factory=dict)
    relay_routes: dict[str, str] = field(default_factory=dict)
    shared_in_conversation: dict[str, str] = field(default_factory=dict)
    shares_done: set[str] = field(default_factory=set)
    seen_events: set[str] = field(default_factory=set)
    conversation_log: dict[str, list[dict]] = field(default_factory=dict)
    group_members: dict[str, list[str]] = field(default_factory=dict)

    def log_message(
        self,
        conversation: str,
        author: str,
        text: str,
        ts: str,
        bot: bool,
        payload: dict | None = None,
    ) -> None:
        record = {"author": author, "text": text, "ts": ts, "bot": bot}
        if payload:
            record["payload"] = payload
        self.conversation_log.setdefault(conversation, []).append(record)

    def to_json(self) -> dict:
        return {
            "exchanges": {k: v.to_json() for k, v in self.exchanges.items()},
            "drafts": {k: v.to_json() for k, v in self.drafts.items()},
            "sessions": {k: v.to_json() for k, v in self.sessions.items()},
            "relay_routes": self.relay_routes,
            "shared_in_conversation": self.shared_in_conversation,
            "shares_done": sorted(self.shares_done),
            "seen_events": sorted(self.seen_events),
            "conversation_log": self.conversation_log,
            "group_members": self.group_members,
        }

    @classmethod
    def from_json(cls, data: dict) -> "WorkspaceState":
        return cls(
            exchanges={k: QAExchange.from_json(v) for k, v in data["exchanges"].items()},
            drafts={k: SuggestionDraft.from_json(v) for k, v in data["drafts"].items()},
            sessions={k: UpdateSession.from_json(v) for k, v in data["sessions"].items()},
            relay_routes=dict(data["relay_routes"]),
            shared_in_conversation=dict(data["shared_in_conversation"]),
            shares_done=set(data["shares_done"]),
            seen_events=set(data["seen_events"]),
            conversation_log={k: list(v) for k, v in data["conversation_log"].items()},
            group_members={k: list(v) for k, v in data.get("group_members", {}).items()},
        )

    def save(self, path: Path) -> None:
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(json.dumps(self.to_json(), ensure_ascii=False), encoding="utf-8")
        tmp.replace(path)

    @classmethod
    def load(cls, path: Path) -> "WorkspaceState":
        return cls.from_json(json.loads(path.read_text(encoding="utf-8")))


def make_provider(config: WorkspaceConfig):
    if config.provider.kind == "mock":
        return MockProvider(dim=config.dim)
    templates = (
        PromptTemplates.load(config.provider.templates_dir)
        if config.provider.templates_dir
        else PromptTemplates.default()
    )
    return RemoteProvider(
        RemoteProfile(
            endpoint=config.provider.endpoint,
            model=config.provider.model,
            embed_model=config.provider.embed_model,
            token_env=config.provider.token_env,
            timeout=config.provider.timeout,
            max_in_flight=config.provider.max_in_flight,
            templates=templates,
        )
    )


class Workspace:
    """Everything one workspace needs, wired together."""

    def __init__(self, config: WorkspaceConfig, audit: AuditLog | None = None):
        self.config = config
        self.roster = config.roster
        self.audit = audit if audit is not None else AuditLog(config.audit_path)
        self.now_ts = ""
        self.store = RepoStore(config.root)
        self.remote_sync = NullRemoteSync()
        self.provider = RecordingProvider(make_provider(config), self._record_provider_call)
        self.retriever = Retriever(self.provider, self.roster, config.max_chunk_chars)
        self.retriever.build(self.store.snapshot)
        if config.state_path and Path(config.state_path).exists():
            self.state = WorkspaceState.load(Path(config.state_path))
        else:
            self.state = WorkspaceState()

    def _record_provider_call(self, op: str, payload: dict) -> None:
        self.audit.record("provider_call", self.now_ts, op=op, payload=payload)

    def persist(self) -> None:
        if self.config.state_path:
            self.state.save(Path(self.config.state_path))
