"""Q&A sharing: post an exchange to the Q&A channel or privately to chosen
people, with anonymity and anonymous follow-up relay.

An anonymous share renders its author as exactly "A team member", excludes
the questioner from private conversations, and registers a relay route so
follow-up replies reach the questioner by DM without disclosure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .events import Action

ANONYMOUS_AUTHOR = "A team member"
ANONYMOUS_ICON = "avatar:anonymous"

TO_CHANNEL = "to_channel"
TO_PRIVATE = "to_private"


class ShareError(Exception):
    pass


@dataclass(frozen=True)
class ShareRequest:
    exchange_id: str
    mode: str  # to_channel | to_private
    comment: str = ""
    anonymous: bool = False
    recipients: tuple[str, ...] = ()


@dataclass(frozen=True)
class SharedPost:
    author_label: str
    question: str
    answer_text: str
    comment: str
    exchange_id: str
    conversation: str

    def render(self) -> str:
        return render_post(self.author_label, self.question, self.answer_text, self.comment)


@dataclass
class ModalModel:
    modal: str
    exchange_id: str
    mode: str
    comment: str = ""
    anonymous: bool = False
    recipients: list[str] = field(default_factory=list)
    preview: str = ""
    preview_anonymous: str = ""

    def to_json(self) -> dict:
        return {
            "modal": self.modal,
            "exchange_id": self.exchange_id,
            "mode": self.mode,
            "comment": self.comment,
            "anonymous": self.anonymous,
            "recipients": self.recipients,
            "preview": self.preview,
            "preview_anonymous": self.preview_anonymous,
        }


def render_post(author_label: str, question: str, answer_text: str, comment: str) -> str:
    """The one rendering rule shared by previews and actual posts."""
    lines = [f"{author_label} asked:", f"> {question}", "", answer_text]
    if comment:
        lines += ["", f"Comment: {comment}"]
    return "\n".join(lines)


def _author(ws, exchange, anonymous: bool) -> tuple[str, str]:
    if anonymous:
        return ANONYMOUS_AUTHOR, ANONYMOUS_ICON
    return ws.roster.display_name(exchange.questioner), f"avatar:{exchange.questioner}"


def open_share_modal(ws, exchange_id: str, mode: str, requester: str) -> ModalModel:
    """Modal model with defaults and a preview equal to the eventual post."""
    exchange = ws.state.exchanges.get(exchange_id)
    if exchange is None:
        raise ShareError(f"unknown exchange {exchange_id}")
    if requester != exchange.questioner:
        raise ShareError("only the questioner can share this exchange")
    if mode not in (TO_CHANNEL, TO_PRIVATE):
        raise ShareError(f"unknown share mode {mode!r}")
    named, _ = _author(ws, exchange, anonymous=False)
    return ModalModel(
        modal="share",
        exchange_id=exchange_id,
        mode=mode,
        recipients=sorted(ws.roster.managers()) if mode == TO_PRIVATE else [],
        preview=render_post(named, exchange.question, exchange.answer_text, ""),
        preview_anonymous=render_post(
            ANONYMOUS_AUTHOR, exchange.question, exchange.answer_text, ""
        ),
    )


def post_share(ws, request: ShareRequest, requester: str):
    """Execute a share. Returns (SharedPost, actions)."""
    exchange = ws.state.exchanges.get(request.exchange_id)
    if exchange is None:
        raise ShareError(f"unknown exchange {request.exchange_id}")
    if requester != exchange.questioner:
        raise ShareError("only the questioner can share this exchange")
    dedup_key = f"{request.exchange_id}:{request.mode}"
    if dedup_key in ws.state.shares_done:
        raise ShareError("this exchange was already shared there")

    author_label, author_icon = _author(ws, exchange, request.anonymous)
    rendered_post: SharedPost
    actions: list[Action]

    if request.mode == TO_CHANNEL:
        if not ws.config.qa_channel:
            raise ShareError("no Q&A channel is configured")
        conversation = f"share-{request.exchange_id}"
        rendered_post = SharedPost(
            author_label, exchange.question, exchange.answer_text,
            request.comment, request.exchange_id, conversation,
        )
        actions = [
            Action(
                "post_message",
                ws.config.qa_channel,
                {
                    "kind": "shared_exchange",
                    "exchange_id": request.exchange_id,
                    "thread": conversation,
                    "author_label": author_label,
                    "author_icon": author_icon,
                    "text": rendered_post.render(),
                },
            )
        ]
    elif request.mode == TO_PRIVATE:
        recipients = list(dict.fromkeys(request.recipients))
        if request.anonymous:
            recipients = [r for r in recipients if r != exchange.questioner]
        if not recipients:
            raise ShareError("private sharing needs at least one recipient")
        conversation = f"group-{request.exchange_id}"
        members = sorted(set(recipients) | {ws.config.bot_id})
        if not request.anonymous:
            members = sorted(set(members) | {exchange.questioner})
        rendered_post = SharedPost(
            author_label, exchange.question, exchange.answer_text,
            request.comment, request.exchange_id, conversation,
        )
        actions = [
            Action(
                "create_group_conversation",
                conversation,
                {"kind": "group", "members": members},
            ),
            Action(
                "post_message",
                conversation,
                {
                    "kind": "shared_exchange",
                    "exchange_id": request.exchange_id,
                    "author_label": author_label,
                    "author_icon": author_icon,
                    "text": rendered_post.render(),
                },
            ),
        ]
    else:
        raise ShareError(f"unknown share mode {request.mode!r}")

    ws.state.shares_done.add(dedup_key)
    ws.state.shared_in_conversation[rendered_post.conversation] = request.exchange_id
    if request.anonymous:
        ws.state.relay_routes[rendered_post.conversation] = exchange.questioner
    ws.audit.record(
        "share",
        ws.now_ts,
        mode=request.mode,
        anonymous=request.anonymous,
        exchange_id=request.exchange_id,
    )
    return rendered_post, actions


def relay_followup(ws, event) -> list[Action]:
    """Forward a reply in an anonymous conversation to the hidden questioner."""
    questioner = ws.state.relay_routes.get(event.conversation)
    if questioner is None or event.author in (ws.config.bot_id, questioner):
        return []
    author_name = (
        ws.roster.display_name(event.author) if event.author in ws.roster else event.author
    )
    ws.audit.record("relay", ws.now_ts, conversation=event.conversation, to=questioner)
    return [
        Action(
            "dm_user",
            questioner,
            {
                "kind": "relay",
                "from": author_name,
                "text": event.text,
                "exchange_id": ws.state.shared_in_conversation.get(event.conversation, ""),
                "note": f"{author_name} replied to your shared question:",
            },
        )
    ]
