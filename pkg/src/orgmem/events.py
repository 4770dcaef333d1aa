"""Platform-agnostic inbound events and outbound actions.

These two shapes are the whole adapter contract: a chat platform (or the
bundled simulator / socket server) turns its native callbacks into
ChatEvents and renders Actions back out.
"""

from __future__ import annotations

from dataclasses import dataclass, field

EVENT_KINDS = ("dm_message", "channel_message", "mention", "button_click", "modal_submit")
ACTION_KINDS = (
    "post_message",
    "post_thread_reply",
    "post_ephemeral",
    "open_modal",
    "dm_user",
    "create_group_conversation",
)

# Action kinds addressed to a single user rather than a conversation.
USER_TARGETED = ("post_ephemeral", "open_modal", "dm_user")


class ProtocolError(Exception):
    pass


@dataclass(frozen=True)
class ChatEvent:
    event_id: str
    kind: str
    conversation: str
    author: str
    text: str = ""
    payload: dict = field(default_factory=dict)
    ts: str = ""

    def __post_init__(self):
        if self.kind not in EVENT_KINDS:
            raise ProtocolError(f"unknown event kind {self.kind!r}")

    def to_json(self) -> dict:
        return {
            "event_id": self.event_id,
            "kind": self.kind,
            "conversation": self.conversation,
            "author": self.author,
            "text": self.text,
            "payload": self.payload,
            "ts": self.ts,
        }

    @classmethod
    def from_json(cls, data: dict) -> "ChatEvent":
        return cls(
            event_id=data["event_id"],
            kind=data["kind"],
            conversation=data.get("conversation", ""),
            author=data.get("author", ""),
            text=data.get("text", ""),
            payload=data.get("payload", {}),
            ts=data.get("ts", ""),
        )


@dataclass(frozen=True)
class Action:
    kind: str
    target: str  # conversation id, or user id for user-targeted kinds
    payload: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ACTION_KINDS:
            raise ProtocolError(f"unknown action kind {self.kind!r}")

    def to_json(self) -> dict:
        return {"kind": self.kind, "target": self.target, "payload": self.payload}

    @classmethod
    def from_json(cls, data: dict) -> "Action":
        return cls(kind=data["kind"], target=data["target"], payload=data.get("payload", {}))


def dm_conversation(user_id: str) -> str:
    """Conversation id convention for a user's DM with the bot."""
    return f"dm-{user_id}"
