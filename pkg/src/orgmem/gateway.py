"""Event router: the platform-agnostic boundary of the service.

Normalizes inbound chat events, dispatches to the Q&A, share, extraction,
and update pipelines, enforces the manager gate before anything reaches
the update flow, deduplicates replayed event ids, and appends every event
and action to the audit log before delivery.
"""

from __future__ import annotations

from .docstore import DocStoreError
from .events import Action, ChatEvent, ProtocolError
from .extraction import ExtractionError, edit_draft, handle_update_request
from .privacy import pseudonymize
from .provider import Intent, ProviderError
from .qa import handle_question
from .share import ShareError, ShareRequest, open_share_modal, post_share, relay_followup
from .update_flow import (
    AuthorizationError,
    UpdateFlowError,
    manager_action,
    submit_suggestion,
)
from .workspace import Workspace

# Payload types only managers may send; rejected here before dispatch.
MANAGER_ACTION_TYPES = {
    "start",
    "decline",
    "apply",
    "skip",
    "stop",
    "auto_select",
    "select_file",
    "create_file",
    "create_new_section",
    "edit_suggestion",
    "edit_proposal",
}

CHATTER_REPLY = (
    "I answer questions from the group's documents and help save new "
    "knowledge. Ask me a question, or say \"document this\" to start an update."
)


def _error_action(user: str, message: str) -> Action:
    return Action("post_ephemeral", user, {"kind": "error", "text": message})


class Gateway:
    def __init__(self, workspace: Workspace):
        self.ws = workspace

    # -- entry points ----------------------------------------------------

    def ingest_json(self, data: dict) -> list[Action]:
        """Parse and ingest a raw event dict; protocol errors become actions."""
        try:
            event = ChatEvent.from_json(data)
        except (ProtocolError, KeyError, TypeError) as exc:
            author = data.get("author", "") if isinstance(data, dict) else ""
            self.ws.audit.record(
                "error",
                data.get("ts", "") if isinstance(data, dict) else "",
                message=f"protocol error: {exc}",
            )
            return [_error_action(author, f"protocol error: {exc}")]
        return self.ingest(event)

    def ingest(self, event: ChatEvent) -> list[Action]:
        ws = self.ws
        if event.event_id in ws.state.seen_events:
            ws.audit.record("duplicate_event", event.ts, event_id=event.event_id)
            return []
        ws.state.seen_events.add(event.event_id)
        ws.now_ts = event.ts
        ws.audit.record_event(event)
        try:
            actions = self._route(event)
        except (ShareError, UpdateFlowError, ExtractionError, DocStoreError, ProtocolError) as exc:
            ws.audit.record("error", event.ts, event_id=event.event_id, message=str(exc))
            actions = [_error_action(event.author, str(exc))]
        for action in actions:
            ws.audit.record_action(action, event.ts)
            self._log_outbound(action, event.ts)
        ws.persist()
        return actions

    # -- routing ---------------------------------------------------------

    def _route(self, event: ChatEvent) -> list[Action]:
        if event.kind in ("dm_message", "channel_message", "mention"):
            return self._route_message(event)
        if event.kind == "button_click":
            return self._route_button(event)
        if event.kind == "modal_submit":
            return self._route_modal(event)
        raise ProtocolError(f"unroutable event kind {event.kind!r}")

    def _route_message(self, event: ChatEvent) -> list[Action]:
        ws = self.ws
        actions = list(relay_followup(ws, event))
        if event.kind in ("dm_message", "mention"):
            text = self._strip_handle(event.text)
            masked, _ = pseudonymize(text, ws.roster)
            try:
                intent = ws.provider.classify_intent(masked)
            except ProviderError as exc:
                ws.audit.record(
                    "error", event.ts, event_id=event.event_id,
                    message=f"provider failure: {exc}",
                )
                ws.state.log_message(event.conversation, event.author, event.text, event.ts, False)
                return actions + [
                    Action(
                        "post_message",
                        event.conversation,
                        {"kind": "apology", "text": "Sorry, I could not process that right now."},
                    )
                ]
            if intent is Intent.QUESTION:
                origin = "dm" if event.kind == "dm_message" else "channel"
                _, qa_actions = handle_question(ws, event, text, origin)
                actions.extend(qa_actions)
            elif intent is Intent.UPDATE_REQUEST:
                _, ex_actions = handle_update_request(ws, event)
                actions.extend(ex_actions)
            else:
                actions.append(
                    Action(
                        "post_message",
                        event.conversation,
                        {"kind": "fallback", "text": CHATTER_REPLY},
                    )
                )
        ws.state.log_message(event.conversation, event.author, event.text, event.ts, False)
        return actions

    def _route_button(self, event: ChatEvent) -> list[Action]:
        ws = self.ws
        action_type = event.payload.get("action", "")
        if action_type in ("share_to_channel", "share_private"):
            mode = "to_channel" if action_type == "share_to_channel" else "to_private"
            modal = open_share_modal(
                ws, event.payload.get("exchange_id", ""), mode, event.author
            )
            return [Action("open_modal", event.author, modal.to_json())]
        if action_type == "suggest_update":
            draft = ws.state.drafts.get(event.payload.get("draft_id", ""))
            if draft is None:
                raise ExtractionError(f"unknown draft {event.payload.get('draft_id', '')!r}")
            if event.author != draft.contributor:
                raise ExtractionError("only the contributor can submit this draft")
            _, actions = submit_suggestion(ws, draft, event)
            return actions
        if action_type == "edit_draft":
            draft = ws.state.drafts.get(event.payload.get("draft_id", ""))
            if draft is None:
                raise ExtractionError(f"unknown draft {event.payload.get('draft_id', '')!r}")
            return [
                Action(
                    "open_modal",
                    event.author,
                    {
                        "modal": "edit_draft",
                        "draft_id": draft.draft_id,
                        "text": draft.text,
                    },
                )
            ]
        if action_type in MANAGER_ACTION_TYPES:
            return self._manager_dispatch(event, action_type, event.payload)
        raise ProtocolError(f"unknown button action {action_type!r}")

    def _route_modal(self, event: ChatEvent) -> list[Action]:
        ws = self.ws
        modal = event.payload.get("modal", "")
        if modal == "share":
            request = ShareRequest(
                exchange_id=event.payload.get("exchange_id", ""),
                mode=event.payload.get("mode", ""),
                comment=event.payload.get("comment", ""),
                anonymous=bool(event.payload.get("anonymous", False)),
                recipients=tuple(event.payload.get("recipients", [])),
            )
            _, actions = post_share(ws, request, event.author)
            return actions
        if modal == "edit_draft":
            _, actions = edit_draft(
                ws,
                event.payload.get("draft_id", ""),
                event.author,
                event.payload.get("text", ""),
            )
            return actions
        if modal in MANAGER_ACTION_TYPES:
            return self._manager_dispatch(event, modal, event.payload)
        raise ProtocolError(f"unknown modal {modal!r}")

    def _manager_dispatch(self, event: ChatEvent, action_type: str, payload: dict) -> list[Action]:
        ws = self.ws
        if not ws.roster.is_manager(event.author):
            raise AuthorizationError("only managers can act on update sessions")
        action = {
            "type": action_type,
            "path": payload.get("path", ""),
            "text": payload.get("text", ""),
            "heading": payload.get("heading", ""),
        }
        _, actions = manager_action(ws, payload.get("session_id", ""), event.author, action)
        return actions

    # -- helpers ----------------------------------------------------------

    def _strip_handle(self, text: str) -> str:
        return text.replace(self.ws.config.bot_handle, "").strip()

    def _log_outbound(self, action: Action, ts: str) -> None:
        # Full payloads are kept so a reconnecting client can rebuild cards
        # (evidence panels, drafts, review state) from the snapshot alone.
        ws = self.ws
        bot = ws.config.bot_id
        if action.kind in ("post_message", "post_thread_reply"):
            ws.state.log_message(
                action.target, bot, action.payload.get("text", ""), ts, True, action.payload
            )
        elif action.kind == "dm_user":
            conversation = f"dm-{action.target}"
            ws.state.log_message(
                conversation, bot, action.payload.get("text", ""), ts, True, action.payload
            )
        elif action.kind == "create_group_conversation":
            ws.state.group_members[action.target] = list(action.payload.get("members", []))
            ws.state.conversation_log.setdefault(action.target, [])
