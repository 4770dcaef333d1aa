"""Workspace configuration: one JSON document holding the roster, channel
wiring, retrieval knobs, and the provider profile."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .privacy import Roster, RosterEntry
from .provider import DEFAULT_DIM


class ConfigError(Exception):
    pass


@dataclass
class ProviderConfig:
    kind: str = "mock"  # mock | remote
    endpoint: str = ""
    model: str = "gpt-4o-mini"
    embed_model: str = "text-embedding-3-small"
    token_env: str = "ORGMEM_PROVIDER_TOKEN"
    timeout: float = 30.0
    max_in_flight: int = 4
    templates_dir: str = ""  # empty: packaged defaults


@dataclass
class WorkspaceConfig:
    root: Path
    roster: Roster
    qa_channel: str = ""
    theta: float = 0.25
    k: int = 3
    dim: int = DEFAULT_DIM
    max_chunk_chars: int = 2000
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    editor_url_template: str = "file://{path}"
    bot_id: str = "bot"
    bot_handle: str = "@bot"
    audit_path: Path | None = None
    state_path: Path | None = None

    @property
    def managers(self) -> list[str]:
        return self.roster.managers()


def _entry_from_json(data: dict) -> RosterEntry:
    return RosterEntry(
        user_id=data["id"],
        display_name=data["name"],
        role=data.get("role", "member"),
        active=data.get("active", True),
    )


def load_config(path: Path | str) -> WorkspaceConfig:
    """Parse and validate a workspace config file.

    Relative paths inside the file resolve against the file's directory.
    """
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc

    base = path.parent

    def resolve(value: str | None) -> Path | None:
        if not value:
            return None
        p = Path(value)
        return p if p.is_absolute() else (base / p)

    try:
        roster = Roster([_entry_from_json(e) for e in data["roster"]])
        provider_data = data.get("provider", {})
        config = WorkspaceConfig(
            root=resolve(data["root"]),
            roster=roster,
            qa_channel=data.get("qa_channel", ""),
            theta=float(data.get("theta", 0.25)),
            k=int(data.get("k", 3)),
            dim=int(data.get("dim", DEFAULT_DIM)),
            max_chunk_chars=int(data.get("max_chunk_chars", 2000)),
            provider=ProviderConfig(
                kind=provider_data.get("kind", "mock"),
                endpoint=provider_data.get("endpoint", ""),
                model=provider_data.get("model", "gpt-4o-mini"),
                embed_model=provider_data.get("embed_model", "text-embedding-3-small"),
                token_env=provider_data.get("token_env", "ORGMEM_PROVIDER_TOKEN"),
                timeout=float(provider_data.get("timeout", 30.0)),
                max_in_flight=int(provider_data.get("max_in_flight", 4)),
                templates_dir=provider_data.get("templates_dir", ""),
            ),
            editor_url_template=data.get("editor_url_template", "file://{path}"),
            bot_id=data.get("bot_id", "bot"),
            bot_handle=data.get("bot_handle", "@bot"),
            audit_path=resolve(data.get("audit_path")),
            state_path=resolve(data.get("state_path")),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config {path}: {exc}") from exc

    validate_config(config)
    return config


def validate_config(config: WorkspaceConfig) -> None:
    """Bounds shared by file loading and CLI overrides."""
    if not 0 < config.theta < 1:
        raise ConfigError(f"theta must lie in (0, 1), got {config.theta}")
    if config.k < 1:
        raise ConfigError("k must be >= 1")
    if config.max_chunk_chars < 200:
        raise ConfigError("max_chunk_chars must be >= 200")
    if config.dim < 1:
        raise ConfigError("dim must be positive")
    if config.provider.kind not in ("mock", "remote"):
        raise ConfigError(f"unknown provider kind {config.provider.kind!r}")
    if config.provider.kind == "remote" and not config.provider.endpoint:
        raise ConfigError("remote provider requires an endpoint")
