"""Manager-gated review flow turning a submitted suggestion into commits.

Only managers drive sessions, and the first manager to act claims the
session. Declined and stopped sessions leave the repository untouched.
Every commit goes through the document store's single writer and is
followed by an index refresh before the acknowledgment goes out.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .chunking import chunk_document
from .docstore import AppendSection, ChangeSet, CreateFile, ReplaceSpan, Span
from .events import Action
from .extraction import DraftState, SuggestionDraft
from .privacy import deanonymize, pseudonymize_texts
from .retrieval import ScoredChunk, rank
from .textdiff import DiffSegment, word_diff


class UpdateFlowError(Exception):
    pass


class AuthorizationError(UpdateFlowError):
    pass


class IllegalActionError(UpdateFlowError):
    pass


class SessionState(str, Enum):
    PENDING = "pending"
    DECLINED = "declined"
    SELECTING = "selecting"
    PROPOSING = "proposing"
    DONE = "done"
    STOPPED = "stopped"


LEGAL_ACTIONS = {
    SessionState.PENDING: {"edit_suggestion", "decline", "start"},
    SessionState.SELECTING: {"select_file", "auto_select", "create_file"},
    SessionState.PROPOSING: {"edit_proposal", "apply", "skip", "stop", "create_new_section"},
    SessionState.DECLINED: set(),
    SessionState.DONE: set(),
    SessionState.STOPPED: set(),
}

ACTION_TYPES = sorted({t for types in LEGAL_ACTIONS.values() for t in types})

PENDING_BUTTONS = (
    {"action": "edit_suggestion", "label": "Edit Suggestion"},
    {"action": "start", "label": "Start Update Process"},
    {"action": "decline", "label": "Decline"},
)
PROPOSAL_BUTTONS = (
    {"action": "edit_proposal", "label": "Edit"},
    {"action": "apply", "label": "Apply"},
    {"action": "skip", "label": "Skip"},
    {"action": "stop", "label": "Stop"},
    {"action": "create_new_section", "label": "Create New Section"},
)


@dataclass
class DiffProposal:
    """One reviewable change: a section rewrite or an append at file end."""

    path: str
    heading_path: tuple[str, ...]
    span: Span
    proposed_text: str
    segments: tuple[DiffSegment, ...]
    score: float
    kind: str = "replace"  # replace | append
    heading: str = ""  # append proposals only

    def to_json(self) -> dict:
        return {
            "path": self.path,
            "heading_path": list(self.heading_path),
            "span": {"start": self.span.start, "end": self.span.end},
            "proposed_text": self.proposed_text,
            "segments": [s.to_json() for s in self.segments],
            "score": self.score,
            "kind": self.kind,
            "heading": self.heading,
        }

    @classmethod
    def from_json(cls, data: dict) -> "DiffProposal":
        return cls(
            path=data["path"],
            heading_path=tuple(data["heading_path"]),
            span=Span(data["span"]["start"], data["span"]["end"]),
            proposed_text=data["proposed_text"],
            segments=tuple(DiffSegment(s["op"], s["text"]) for s in data["segments"]),
            score=data["score"],
            kind=data["kind"],
            heading=data["heading"],
        )


@dataclass
class UpdateSession:
    session_id: str
    draft_id: str
    suggestion_text: str
    contributor: str
    origin_conversation: str
    state: SessionState = SessionState.PENDING
    claimed_by: str | None = None
    target: str | None = None
    proposals: list[DiffProposal] = field(default_factory=list)
    proposal_index: int = 0
    applied: list[int] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "session_id": self.session_id,
            "draft_id": self.draft_id,
            "suggestion_text": self.suggestion_text,
            "contributor": self.contributor,
            "origin_conversation": self.origin_conversation,
            "state": self.state.value,
            "claimed_by": self.claimed_by,
            "target": self.target,
            "proposals": [p.to_json() for p in self.proposals],
            "proposal_index": self.proposal_index,
            "applied": self.applied,
        }

    @classmethod
    def from_json(cls, data: dict) -> "UpdateSession":
        return cls(
            session_id=data["session_id"],
            draft_id=data["draft_id"],
            suggestion_text=data["suggestion_text"],
            contributor=data["contributor"],
            origin_conversation=data["origin_conversation"],
            state=SessionState(data["state"]),
            claimed_by=data["claimed_by"],
            target=data["target"],
            proposals=[DiffProposal.from_json(p) for p in data["proposals"]],
            proposal_index=data["proposal_index"],
            applied=data["applied"],
        )


def _derived_heading(suggestion: str) -> str:
    heading = " ".join(suggestion.split()[:6]).rstrip(".,;:!?")
    return heading or "Additional Notes"


def submit_suggestion(ws, draft: SuggestionDraft, event):
    """Submit a draft for manager review; returns (UpdateSession, actions)."""
    if draft.state is not DraftState.DRAFT:
        raise UpdateFlowError(f"draft {draft.draft_id} was already submitted")
    draft.state = DraftState.SUBMITTED
    session = UpdateSession(
        session_id=f"sess-{event.event_id}",
        draft_id=draft.draft_id,
        suggestion_text=draft.text,
        contributor=draft.contributor,
        origin_conversation=draft.conversation,
    )
    ws.state.sessions[session.session_id] = session
    contributor_name = (
        ws.roster.display_name(draft.contributor)
        if draft.contributor in ws.roster
        else draft.contributor
    )
    actions = [
        Action(
            "dm_user",
            manager,
            {
                "kind": "review_card",
                "session_id": session.session_id,
                "state": session.state.value,
                "suggestion": session.suggestion_text,
                "contributor": contributor_name,
                "contributor_icon": f"avatar:{draft.contributor}",
                "source_conversation": draft.conversation,
                "buttons": [dict(b, session_id=session.session_id) for b in PENDING_BUTTONS],
            },
        )
        for manager in sorted(ws.roster.managers())
    ]
    actions.append(
        Action(
            "post_message",
            draft.conversation,
            {
                "kind": "update_notice",
                "session_id": session.session_id,
                "text": f"{contributor_name} suggested a documentation update; "
                "it is waiting for manager review.",
            },
        )
    )
    return session, actions


def _proposal_card(ws, session: UpdateSession) -> Action:
    proposal = session.proposals[session.proposal_index]
    return Action(
        "dm_user",
        session.claimed_by,
        {
            "kind": "proposal_card",
            "session_id": session.session_id,
            "state": session.state.value,
            "index": session.proposal_index,
            "total": len(session.proposals),
            "path": proposal.path,
            "heading_path": list(proposal.heading_path),
            "proposed_text": proposal.proposed_text,
            "segments": [s.to_json() for s in proposal.segments],
            "score": proposal.score,
            "buttons": [dict(b, session_id=session.session_id) for b in PROPOSAL_BUTTONS],
        },
    )


def generate_proposals(ws, session: UpdateSession) -> list[DiffProposal]:
    """Up to three per-section rewrites for the target file, best first;
    an append-at-end proposal when no section is similar enough."""
    path = session.target
    file = ws.store.snapshot.files[path]
    chunks = chunk_document(file, ws.config.max_chunk_chars)
    suggestion_vec = ws.retriever.embed_text(session.suggestion_text)
    scored = rank(
        [
            ScoredChunk(chunk, float(ws.retriever.embed_text(chunk.body) @ suggestion_vec))
            for chunk in chunks
        ]
    )
    qualifying = [s for s in scored if s.score >= ws.config.theta / 2][:3]
    proposals: list[DiffProposal] = []
    for entry in qualifying:
        masked, pmap = pseudonymize_texts(
            [entry.chunk.body, session.suggestion_text], ws.roster
        )
        proposed = deanonymize(ws.provider.propose_edit(masked[0], masked[1]), pmap)
        diff = word_diff(entry.chunk.body, proposed)
        proposals.append(
            DiffProposal(
                path=path,
                heading_path=entry.chunk.heading_path,
                span=entry.chunk.span,
                proposed_text=proposed,
                segments=diff.segments,
                score=entry.score,
                kind="replace",
            )
        )
    if not proposals:
        end = len(file.body)
        diff = word_diff("", session.suggestion_text)
        proposals.append(
            DiffProposal(
                path=path,
                heading_path=(),
                span=Span(end, end),
                proposed_text=session.suggestion_text,
                segments=diff.segments,
                score=0.0,
                kind="append",
                heading=_derived_heading(session.suggestion_text),
            )
        )
    return proposals


def _auto_select(ws, session: UpdateSession) -> str:
    """File with the highest mean similarity over its two best chunks."""
    snapshot = ws.store.snapshot
    if not snapshot.files:
        raise UpdateFlowError("repository has no files; use Create New File")
    suggestion_vec = ws.retriever.embed_text(session.suggestion_text)
    best_path = None
    best_score = float("-inf")
    for path in snapshot.paths():
        chunks = chunk_document(snapshot.files[path], ws.config.max_chunk_chars)
        if not chunks:
            continue
        scores = sorted(
            (float(ws.retriever.embed_text(c.body) @ suggestion_vec) for c in chunks),
            reverse=True,
        )
        top2 = scores[: min(2, len(scores))]
        mean = sum(top2) / len(top2)
        if mean > best_score:
            best_path, best_score = path, mean
    if best_path is None:
        raise UpdateFlowError("repository has no chunkable files; use Create New File")
    return best_path


def _commit(ws, session: UpdateSession, edits, action_type: str, actor: str):
    changeset = ChangeSet(ws.store.snapshot.revision, tuple(edits))
    commit = ws.store.apply_changeset(
        changeset,
        author=actor,
        message=f"assisted update ({session.session_id}, {action_type})",
        timestamp=ws.now_ts or None,
    )
    ws.retriever.refresh(commit, ws.store.snapshot)
    ws.remote_sync.push(commit)
    session.applied.append(commit.commit_id)
    ws.audit.record(
        "commit",
        ws.now_ts,
        method="assisted",
        commit_id=commit.commit_id,
        session_id=session.session_id,
        action=action_type,
        author=actor,
        paths=list(commit.touched_paths()),
        words_added=commit.words_added,
        words_deleted=commit.words_deleted,
    )
    return commit


def _ack_actions(ws, session: UpdateSession, path: str) -> list[Action]:
    url = ws.config.editor_url_template.format(path=path)
    applied = len(session.applied)
    noun = "change" if applied == 1 else "changes"
    if applied:
        text = (
            f"Documentation update finished: {applied} {noun} applied to {path}. "
            f"You can edit the file directly here: {url}"
        )
    else:
        text = f"Documentation review finished for {path}; no changes were applied."
    return [
        Action(
            "post_message",
            session.origin_conversation,
            {"kind": "update_ack", "session_id": session.session_id, "text": text, "url": url},
        )
    ]


def _file_picker(ws, session: UpdateSession) -> Action:
    buttons = [
        {"action": "select_file", "session_id": session.session_id, "path": p, "label": p}
        for p in ws.store.snapshot.paths()
    ]
    buttons.append(
        {"action": "auto_select", "session_id": session.session_id, "label": "Most Relevant File"}
    )
    buttons.append(
        {"action": "create_file", "session_id": session.session_id, "label": "Create New File"}
    )
    return Action(
        "dm_user",
        session.claimed_by,
        {
            "kind": "file_picker",
            "session_id": session.session_id,
            "state": session.state.value,
            "files": ws.store.snapshot.paths(),
            "buttons": buttons,
        },
    )


def _shift_pending_spans(session: UpdateSession, applied: DiffProposal) -> None:
    # Later spans in the same file move by the applied length delta.
    delta = len(applied.proposed_text) - (applied.span.end - applied.span.start)
    if delta == 0 or applied.kind == "append":
        return
    for i in range(session.proposal_index + 1, len(session.proposals)):
        p = session.proposals[i]
        if p.path == applied.path and p.span.start >= applied.span.end:
            session.proposals[i] = DiffProposal(
                path=p.path,
                heading_path=p.heading_path,
                span=Span(p.span.start + delta, p.span.end + delta),
                proposed_text=p.proposed_text,
                segments=p.segments,
                score=p.score,
                kind=p.kind,
                heading=p.heading,
            )


def _advance(ws, session: UpdateSession) -> list[Action]:
    session.proposal_index += 1
    if session.proposal_index >= len(session.proposals):
        session.state = SessionState.DONE
        return _ack_actions(ws, session, session.target)
    return [_proposal_card(ws, session)]


def manager_action(ws, session_id: str, actor: str, action: dict):
    """Apply one manager decision to a session; returns (session, actions).

    Raises AuthorizationError for non-managers or a second manager trying
    to drive a claimed session, IllegalActionError for actions not legal in
    the current state. Neither changes any state.
    """
    session = ws.state.sessions.get(session_id)
    if session is None:
        raise UpdateFlowError(f"unknown session {session_id}")
    if not ws.roster.is_manager(actor):
        raise AuthorizationError("only managers can act on update sessions")
    if session.claimed_by is not None and session.claimed_by != actor:
        raise AuthorizationError(
            f"session {session_id} is already being handled by another manager"
        )
    action_type = action.get("type", "")
    if action_type not in LEGAL_ACTIONS[session.state]:
        raise IllegalActionError(
            f"action {action_type!r} is not legal in state {session.state.value!r}"
        )
    if session.claimed_by is None:
        session.claimed_by = actor

    if action_type == "edit_suggestion":
        text = action.get("text", "")
        if not text.strip():
            raise UpdateFlowError("suggestion text cannot be empty")
        session.suggestion_text = text
        return session, [
            Action(
                "dm_user",
                actor,
                {
                    "kind": "review_card",
                    "session_id": session.session_id,
                    "state": session.state.value,
                    "suggestion": session.suggestion_text,
                    "buttons": [dict(b, session_id=session.session_id) for b in PENDING_BUTTONS],
                },
            )
        ]

    if action_type == "decline":
        session.state = SessionState.DECLINED
        return session, [
            Action(
                "post_message",
                session.origin_conversation,
                {
                    "kind": "update_notice",
                    "session_id": session.session_id,
                    "text": "The suggested documentation update was declined.",
                },
            )
        ]

    if action_type == "start":
        session.state = SessionState.SELECTING
        return session, [_file_picker(ws, session)]

    if action_type in ("select_file", "auto_select"):
        if action_type == "select_file":
            path = action.get("path", "")
            if path not in ws.store.snapshot.files:
                raise UpdateFlowError(f"no such file: {path}")
        else:
            path = _auto_select(ws, session)
        session.target = path
        session.proposals = generate_proposals(ws, session)
        session.proposal_index = 0
        session.state = SessionState.PROPOSING
        return session, [_proposal_card(ws, session)]

    if action_type == "create_file":
        path = action.get("path", "")
        if not path:
            raise UpdateFlowError("create_file needs a path")
        body = session.suggestion_text
        if not body.endswith("\n"):
            body += "\n"
        _commit(ws, session, [CreateFile(path, body)], action_type, actor)
        session.target = path
        session.state = SessionState.DONE
        return session, _ack_actions(ws, session, path)

    if action_type == "edit_proposal":
        text = action.get("text", "")
        if not text:
            raise UpdateFlowError("proposal text cannot be empty")
        current = session.proposals[session.proposal_index]
        base = ws.store.snapshot.body(current.path)[current.span.start : current.span.end]
        diff = word_diff(base, text)
        session.proposals[session.proposal_index] = DiffProposal(
            path=current.path,
            heading_path=current.heading_path,
            span=current.span,
            proposed_text=text,
            segments=diff.segments,
            score=current.score,
            kind=current.kind,
            heading=current.heading,
        )
        return session, [_proposal_card(ws, session)]

    if action_type == "apply":
        proposal = session.proposals[session.proposal_index]
        if proposal.kind == "append":
            edits = [AppendSection(proposal.path, proposal.heading, proposal.proposed_text)]
        else:
            edits = [ReplaceSpan(proposal.path, proposal.span, proposal.proposed_text)]
        _commit(ws, session, edits, action_type, actor)
        _shift_pending_spans(session, proposal)
        return session, _advance(ws, session)

    if action_type == "skip":
        return session, _advance(ws, session)

    if action_type == "stop":
        session.state = SessionState.STOPPED
        return session, [
            Action(
                "post_message",
                session.origin_conversation,
                {
                    "kind": "update_notice",
                    "session_id": session.session_id,
                    "text": "The documentation review was stopped by the manager.",
                },
            )
        ]

    if action_type == "create_new_section":
        heading = action.get("heading", "") or _derived_heading(session.suggestion_text)
        text = action.get("text", "") or session.suggestion_text
        _commit(ws, session, [AppendSection(session.target, heading, text)], action_type, actor)
        session.state = SessionState.DONE
        return session, _ack_actions(ws, session, session.target)

    raise IllegalActionError(f"unknown action type {action_type!r}")
