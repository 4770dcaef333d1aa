"""Question handling: retrieve, judge, compose, and emit the answer, the
evidence panel, and the questioner-only share banner."""

from __future__ import annotations

from dataclasses import dataclass, field

from .chunking import anchor_link
from .events import Action
from .privacy import deanonymize, pseudonymize_texts
from .provider import ProviderError
from .retrieval import judge

SNIPPET_LIMIT = 240
ABSTAIN_NOTICE = "I could not find this in the lab documents."
APOLOGY_TEXT = "Sorry, I could not process that right now. Please try again shortly."

SHARE_BUTTONS = (
    {"action": "share_to_channel", "label": "Ask the Q&A Channel"},
    {"action": "share_private", "label": "Ask in Private"},
)


@dataclass(frozen=True)
class Reference:
    """Verbatim snippet plus anchor proving where an answer came from."""

    chunk_id: str
    anchor: str
    snippet: str
    score: float

    def to_json(self) -> dict:
        return {
            "chunk_id": self.chunk_id,
            "anchor": self.anchor,
            "snippet": self.snippet,
            "score": self.score,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Reference":
        return cls(data["chunk_id"], data["anchor"], data["snippet"], data["score"])


@dataclass
class QAExchange:
    exchange_id: str
    questioner: str
    question: str
    answered: bool
    answer_text: str
    references: list[Reference] = field(default_factory=list)
    origin_kind: str = "dm"  # dm | channel
    conversation: str = ""
    ts: str = ""

    def to_json(self) -> dict:
        return {
            "exchange_id": self.exchange_id,
            "questioner": self.questioner,
            "question": self.question,
            "answered": self.answered,
            "answer_text": self.answer_text,
            "references": [r.to_json() for r in self.references],
            "origin_kind": self.origin_kind,
            "conversation": self.conversation,
            "ts": self.ts,
        }

    @classmethod
    def from_json(cls, data: dict) -> "QAExchange":
        return cls(
            exchange_id=data["exchange_id"],
            questioner=data["questioner"],
            question=data["question"],
            answered=data["answered"],
            answer_text=data["answer_text"],
            references=[Reference.from_json(r) for r in data["references"]],
            origin_kind=data["origin_kind"],
            conversation=data["conversation"],
            ts=data["ts"],
        )


def _abstain_text(references: list[Reference]) -> str:
    if not references:
        return ABSTAIN_NOTICE
    anchors = ", ".join(r.anchor for r in references)
    return f"{ABSTAIN_NOTICE} Related sections you could check: {anchors}"


def handle_question(ws, event, question: str, origin_kind: str):
    """Run one question end to end.

    Returns (QAExchange | None, actions). On provider failure the exchange
    is not stored and only an apology goes out.
    """
    try:
        scored = ws.retriever.search(question, ws.config.k)
        verdict = judge(scored, ws.config.theta, cap=min(3, ws.config.k))
        references = [
            Reference(
                chunk_id=s.chunk.chunk_id,
                anchor=anchor_link(s.chunk),
                snippet=s.chunk.body[:SNIPPET_LIMIT],
                score=s.score,
            )
            for s in verdict.chunks
        ]
        if verdict.answerable:
            bodies = [s.chunk.body for s in verdict.chunks]
            masked, pmap = pseudonymize_texts([question] + bodies, ws.roster)
            draft = ws.provider.compose_answer(
                masked[0],
                [(s.chunk.chunk_id, body) for s, body in zip(verdict.chunks, masked[1:])],
            )
            answer_text = deanonymize(draft.text, pmap)
        else:
            answer_text = _abstain_text(references)
    except ProviderError as exc:
        ws.audit.record(
            "error", ws.now_ts, event_id=event.event_id, message=f"provider failure: {exc}"
        )
        return None, [
            Action("post_message", event.conversation, {"kind": "apology", "text": APOLOGY_TEXT})
        ]

    exchange = QAExchange(
        exchange_id=f"ex-{event.event_id}",
        questioner=event.author,
        question=question,
        answered=verdict.answerable,
        answer_text=answer_text,
        references=references,
        origin_kind=origin_kind,
        conversation=event.conversation,
        ts=event.ts,
    )
    ws.state.exchanges[exchange.exchange_id] = exchange

    actions = [
        Action(
            "post_message",
            event.conversation,
            {
                "kind": "answer",
                "exchange_id": exchange.exchange_id,
                "answered": verdict.answerable,
                "text": answer_text,
            },
        )
    ]
    if references:
        actions.append(
            Action(
                "post_thread_reply",
                event.conversation,
                {
                    "kind": "evidence",
                    "exchange_id": exchange.exchange_id,
                    "references": [r.to_json() for r in references],
                },
            )
        )
    actions.append(
        Action(
            "post_ephemeral",
            event.author,
            {
                "kind": "share_banner",
                "conversation": event.conversation,
                "exchange_id": exchange.exchange_id,
                "text": "Want to continue the discussion? Share this Q&A.",
                "buttons": [dict(b, exchange_id=exchange.exchange_id) for b in SHARE_BUTTONS],
            },
        )
    )
    ws.audit.record(
        "qa",
        ws.now_ts,
        origin=origin_kind,
        role=ws.roster.role(event.author) if event.author in ws.roster else "member",
        answered=verdict.answerable,
        exchange_id=exchange.exchange_id,
    )
    return exchange, actions
