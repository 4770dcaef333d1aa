"""Knowledge extraction: bounded conversation window in, editable
suggestion draft out.

The window is capped at the ten messages preceding the mention plus the
shared Q&A anchored in the conversation, if any. Everything crossing the
provider boundary is pseudonymized with one shared map; the draft shown to
members has real names restored.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .events import Action
from .privacy import deanonymize, pseudonymize_texts
from .provider import ProviderError, WindowMessage, WindowPayload

WINDOW_LIMIT = 10

USAGE_HELP = (
    "Mention me after a discussion worth documenting and I will draft a "
    "suggested update from the recent messages."
)
NOTHING_FOUND = "I could not find anything documentable in this conversation."

DRAFT_BUTTONS = (
    {"action": "edit_draft", "label": "Edit"},
    {"action": "suggest_update", "label": "Suggest Update"},
)


class ExtractionError(Exception):
    pass


class DraftState(str, Enum):
    DRAFT = "draft"
    SUBMITTED = "submitted"
    WITHDRAWN = "withdrawn"


@dataclass
class SuggestionDraft:
    draft_id: str
    text: str
    contributor: str
    conversation: str
    state: DraftState = DraftState.DRAFT

    def to_json(self) -> dict:
        return {
            "draft_id": self.draft_id,
            "text": self.text,
            "contributor": self.contributor,
            "conversation": self.conversation,
            "state": self.state.value,
        }

    @classmethod
    def from_json(cls, data: dict) -> "SuggestionDraft":
        return cls(
            draft_id=data["draft_id"],
            text=data["text"],
            contributor=data["contributor"],
            conversation=data["conversation"],
            state=DraftState(data["state"]),
        )


@dataclass(frozen=True)
class ConversationWindow:
    """Anchor exchange (if one was shared here) plus the last messages
    before the mention, oldest first."""

    anchor: object | None  # QAExchange
    messages: tuple[dict, ...]
    mention: dict


def collect_window(ws, event) -> ConversationWindow:
    history = ws.state.conversation_log.get(event.conversation, [])
    anchor = None
    exchange_id = ws.state.shared_in_conversation.get(event.conversation)
    if exchange_id:
        anchor = ws.state.exchanges.get(exchange_id)
    return ConversationWindow(
        anchor=anchor,
        messages=tuple(history[-WINDOW_LIMIT:]),
        mention={"author": event.author, "text": event.text, "bot": False},
    )


def _display(ws, user_id: str) -> str:
    return ws.roster.display_name(user_id) if user_id in ws.roster else user_id


def build_payload(ws, window: ConversationWindow) -> tuple[WindowPayload, object]:
    """Pseudonymize the whole window with one map; returns (payload, map)."""
    texts: list[str] = []
    for msg in window.messages:
        texts.append(_display(ws, msg["author"]))
        texts.append(msg["text"])
    texts.append(_display(ws, window.mention["author"]))
    texts.append(window.mention["text"])
    if window.anchor is not None:
        texts.append(_display(ws, window.anchor.questioner))
        texts.append(window.anchor.question)
        texts.append(window.anchor.answer_text)
    masked, pmap = pseudonymize_texts(texts, ws.roster)

    it = iter(masked)
    messages = tuple(
        WindowMessage(author=next(it), text=next(it), is_bot=bool(msg.get("bot")))
        for msg in window.messages
    )
    mention = WindowMessage(author=next(it), text=next(it), is_bot=False)
    anchor_question = anchor_answer = None
    if window.anchor is not None:
        masked_questioner = next(it)
        anchor_question = WindowMessage(author=masked_questioner, text=next(it))
        anchor_answer = WindowMessage(author="assistant", text=next(it), is_bot=True)
    payload = WindowPayload(
        messages=messages,
        mention=mention,
        anchor_question=anchor_question,
        anchor_answer=anchor_answer,
    )
    return payload, pmap


def handle_update_request(ws, event):
    """Draft a suggested update from the conversation; returns (draft, actions)."""
    window = collect_window(ws, event)
    payload, pmap = build_payload(ws, window)
    try:
        extracted = ws.provider.extract_knowledge(payload)
    except ProviderError as exc:
        ws.audit.record(
            "error", ws.now_ts, event_id=event.event_id, message=f"provider failure: {exc}"
        )
        return None, [
            Action(
                "post_thread_reply",
                event.conversation,
                {"kind": "error", "text": "Sorry, I could not draft a suggestion right now."},
            )
        ]
    if not extracted.strip():
        text = USAGE_HELP if not window.messages and window.anchor is None else NOTHING_FOUND
        return None, [
            Action("post_thread_reply", event.conversation, {"kind": "info", "text": text})
        ]

    draft = SuggestionDraft(
        draft_id=f"draft-{event.event_id}",
        text=deanonymize(extracted, pmap),
        contributor=event.author,
        conversation=event.conversation,
    )
    ws.state.drafts[draft.draft_id] = draft
    actions = [
        Action(
            "post_thread_reply",
            event.conversation,
            {
                "kind": "suggestion_draft",
                "draft_id": draft.draft_id,
                "text": draft.text,
                "contributor": draft.contributor,
                "buttons": [dict(b, draft_id=draft.draft_id) for b in DRAFT_BUTTONS],
            },
        )
    ]
    return draft, actions


def edit_draft(ws, draft_id: str, actor: str, text: str):
    """Replace a draft's text before submission."""
    draft = ws.state.drafts.get(draft_id)
    if draft is None:
        raise ExtractionError(f"unknown draft {draft_id}")
    if actor != draft.contributor:
        raise ExtractionError("only the contributor can edit this draft")
    if draft.state is not DraftState.DRAFT:
        raise ExtractionError("draft was already submitted and can no longer be edited")
    if not text.strip():
        raise ExtractionError("draft text cannot be empty")
    draft.text = text
    return draft, [
        Action(
            "post_thread_reply",
            draft.conversation,
            {
                "kind": "suggestion_draft",
                "draft_id": draft.draft_id,
                "text": draft.text,
                "contributor": draft.contributor,
                "buttons": [dict(b, draft_id=draft.draft_id) for b in DRAFT_BUTTONS],
            },
        )
    ]
