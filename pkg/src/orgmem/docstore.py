"""Versioned store of Markdown documents.

On disk a repository is a directory of ``*.md`` files (the revision-0
bodies) plus an append-only journal ``.om-journal`` holding one JSON commit
record per line. Loading replays the journal over the initial bodies;
nothing ever rewrites a past record. All mutations funnel through a single
writer lock; reads hand out immutable snapshots.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .textdiff import word_diff

JOURNAL_NAME = ".om-journal"
MARKDOWN_SUFFIXES = (".md", ".markdown")


class DocStoreError(Exception):
    """Base error for repository operations."""


class JournalError(DocStoreError):
    """Corrupt or inconsistent journal; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message} (journal line {line})")
        self.line = line


class StaleChangesetError(DocStoreError):
    """The changeset was computed against an older revision."""


@dataclass(frozen=True)
class Span:
    """Half-open character interval into a file body."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"invalid span [{self.start}, {self.end})")


@dataclass(frozen=True)
class DocumentFile:
    path: str
    body: str
    revision: int  # commit that last touched this file; 0 for initial files


@dataclass(frozen=True)
class DocChunk:
    """Heading-delimited, span-addressed unit of a file.

    ``chunk_id`` is stable for unchanged content: it encodes the path, the
    revision at which the file body was last written, and the span.
    """

    chunk_id: str
    path: str
    heading_path: tuple[str, ...]
    body: str
    span: Span
    revision: int

    @staticmethod
    def make_id(path: str, revision: int, span: Span) -> str:
        return f"{path}@{revision}:{span.start}-{span.end}"

    @staticmethod
    def parse_id(chunk_id: str) -> tuple[str, int, Span]:
        head, _, tail = chunk_id.rpartition(":")
        path, _, rev = head.rpartition("@")
        start, _, end = tail.partition("-")
        return path, int(rev), Span(int(start), int(end))


@dataclass(frozen=True)
class ReplaceSpan:
    path: str
    span: Span
    new_text: str

    def to_json(self) -> dict:
        return {
            "op": "replace_span",
            "path": self.path,
            "start": self.span.start,
            "end": self.span.end,
            "text": self.new_text,
        }


@dataclass(frozen=True)
class AppendSection:
    path: str
    heading_title: str
    new_text: str

    def to_json(self) -> dict:
        return {
            "op": "append_section",
            "path": self.path,
            "heading": self.heading_title,
            "text": self.new_text,
        }


@dataclass(frozen=True)
class CreateFile:
    path: str
    body: str

    def to_json(self) -> dict:
        return {"op": "create_file", "path": self.path, "body": self.body}


Edit = ReplaceSpan | AppendSection | CreateFile


def edit_from_json(data: dict) -> Edit:
    op = data.get("op")
    if op == "replace_span":
        return ReplaceSpan(data["path"], Span(data["start"], data["end"]), data["text"])
    if op == "append_section":
        return AppendSection(data["path"], data["heading"], data["text"])
    if op == "create_file":
        return CreateFile(data["path"], data["body"])
    raise ValueError(f"unknown edit op {op!r}")


@dataclass(frozen=True)
class ChangeSet:
    """Ordered edits against one base revision."""

    base_revision: int
    edits: tuple[Edit, ...]


@dataclass(frozen=True)
class CommitRecord:
    commit_id: int
    author: str
    timestamp: str  # RFC 3339
    message: str
    changeset: ChangeSet
    words_added: int
    words_deleted: int

    def touched_paths(self) -> tuple[str, ...]:
        seen: list[str] = []
        for edit in self.changeset.edits:
            if edit.path not in seen:
                seen.append(edit.path)
        return tuple(seen)

    def to_json(self) -> dict:
        return {
            "commit_id": self.commit_id,
            "author": self.author,
            "timestamp": self.timestamp,
            "message": self.message,
            "edits": [e.to_json() for e in self.changeset.edits],
            "words_added": self.words_added,
            "words_deleted": self.words_deleted,
        }


@dataclass(frozen=True)
class RepoSnapshot:
    """Immutable view of every file at one revision; safe to share."""

    revision: int
    files: dict[str, DocumentFile] = field(default_factory=dict)

    def paths(self) -> list[str]:
        return sorted(self.files)

    def body(self, path: str) -> str:
        return self.files[path].body


def _is_markdown(path: str) -> bool:
    return path.lower().endswith(MARKDOWN_SUFFIXES)


def _append_section_body(old: str, heading: str, text: str) -> str:
    if not old:
        sep = ""
    elif old.endswith("\n"):
        sep = "\n"
    else:
        sep = "\n\n"
    block = f"## {heading}\n\n{text}"
    if not block.endswith("\n"):
        block += "\n"
    return old + sep + block


def _apply_edits(files: dict[str, DocumentFile], edits: tuple[Edit, ...], revision: int) -> dict[str, DocumentFile]:
    """Apply validated edits, returning the new file map."""
    out = dict(files)
    # Replace spans per file back-to-front so earlier offsets stay valid.
    replaces: dict[str, list[ReplaceSpan]] = {}
    for edit in edits:
        if isinstance(edit, ReplaceSpan):
            replaces.setdefault(edit.path, []).append(edit)
        elif isinstance(edit, AppendSection):
            old = out[edit.path]
            out[edit.path] = DocumentFile(
                edit.path, _append_section_body(old.body, edit.heading_title, edit.new_text), revision
            )
        else:
            out[edit.path] = DocumentFile(edit.path, edit.body, revision)
    for path, group in replaces.items():
        body = out[path].body
        for edit in sorted(group, key=lambda e: e.span.start, reverse=True):
            body = body[: edit.span.start] + edit.new_text + body[edit.span.end :]
        out[path] = DocumentFile(path, body, revision)
    return out


def _validate_changeset(snapshot: RepoSnapshot, changeset: ChangeSet) -> None:
    if not changeset.edits:
        raise DocStoreError("empty changeset")
    if changeset.base_revision != snapshot.revision:
        raise StaleChangesetError(
            f"stale span: changeset base revision {changeset.base_revision} "
            f"!= current revision {snapshot.revision}"
        )
    spans_by_path: dict[str, list[Span]] = {}
    for edit in changeset.edits:
        if not _is_markdown(edit.path):
            raise DocStoreError(f"not a Markdown path: {edit.path}")
        if isinstance(edit, CreateFile):
            if edit.path in snapshot.files:
                raise DocStoreError(f"file already exists: {edit.path}")
        elif edit.path not in snapshot.files:
            raise DocStoreError(f"no such file: {edit.path}")
        if isinstance(edit, ReplaceSpan):
            body = snapshot.files[edit.path].body
            if edit.span.end > len(body):
                raise DocStoreError(
                    f"span [{edit.span.start}, {edit.span.end}) out of bounds for {edit.path}"
                )
            spans_by_path.setdefault(edit.path, []).append(edit.span)
    for path, spans in spans_by_path.items():
        spans.sort(key=lambda s: s.start)
        for prev, cur in zip(spans, spans[1:]):
            if cur.start < prev.end:
                raise DocStoreError(f"overlapping edit spans on {path}")


def _diff_counts(old_files: dict[str, DocumentFile], new_files: dict[str, DocumentFile], paths: set[str]) -> tuple[int, int]:
    added = deleted = 0
    for path in paths:
        old_body = old_files[path].body if path in old_files else ""
        diff = word_diff(old_body, new_files[path].body)
        added += diff.added
        deleted += diff.deleted
    return added, deleted


def now_rfc3339() -> str:
    return datetime.now(timezone.utc).isoformat()


class RepoStore:
    """Directory-backed repository with an append-only commit journal."""

    def __init__(self, root: Path | str):
        self.root = Path(root)
        self._lock = threading.Lock()
        self._initial: dict[str, DocumentFile] = {}
        self._journal: list[CommitRecord] = []
        self._snapshot = RepoSnapshot(0, {})
        self._load()

    # -- loading -------------------------------------------------------

    def _load(self) -> None:
        if not self.root.is_dir():
            raise DocStoreError(f"unreadable repository root: {self.root}")
        initial: dict[str, DocumentFile] = {}
        for p in sorted(self.root.rglob("*")):
            if p.is_file() and _is_markdown(p.name):
                rel = p.relative_to(self.root).as_posix()
                try:
                    body = p.read_text(encoding="utf-8")
                except UnicodeDecodeError as exc:
                    raise DocStoreError(f"{rel} is not valid UTF-8: {exc}") from exc
                initial[rel] = DocumentFile(rel, body, 0)
        self._initial = initial
        self._journal = []
        files = dict(initial)
        revision = 0
        for lineno, record in self._read_journal():
            if record.commit_id != revision + 1:
                raise JournalError(
                    f"commit_id {record.commit_id} does not follow revision {revision}", lineno
                )
            try:
                _validate_changeset(RepoSnapshot(revision, files), record.changeset)
            except DocStoreError as exc:
                raise JournalError(f"unreplayable record: {exc}", lineno) from exc
            files = _apply_edits(files, record.changeset.edits, record.commit_id)
            revision = record.commit_id
            self._journal.append(record)
        self._snapshot = RepoSnapshot(revision, files)

    def _read_journal(self) -> list[tuple[int, CommitRecord]]:
        path = self.root / JOURNAL_NAME
        if not path.exists():
            return []
        records: list[tuple[int, CommitRecord]] = []
        with path.open(encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                if not line.strip():
                    continue
                try:
                    data = json.loads(line)
                    edits = tuple(edit_from_json(e) for e in data["edits"])
                    record = CommitRecord(
                        commit_id=data["commit_id"],
                        author=data["author"],
                        timestamp=data["timestamp"],
                        message=data["message"],
                        changeset=ChangeSet(data["commit_id"] - 1, edits),
                        words_added=data["words_added"],
                        words_deleted=data["words_deleted"],
                    )
                except (KeyError, ValueError, TypeError) as exc:
                    raise JournalError(f"corrupt journal record: {exc}", lineno) from exc
                records.append((lineno, record))
        return records

    # -- reads ---------------------------------------------------------

    @property
    def snapshot(self) -> RepoSnapshot:
        return self._snapshot

    @property
    def history(self) -> tuple[CommitRecord, ...]:
        return tuple(self._journal)

    def file_at(self, path: str, revision: int) -> str | None:
        """Body of ``path`` after replaying the journal up to ``revision``."""
        files = dict(self._initial)
        for record in self._journal:
            if record.commit_id > revision:
                break
            files = _apply_edits(files, record.changeset.edits, record.commit_id)
        doc = files.get(path)
        return doc.body if doc else None

    # -- writes --------------------------------------------------------

    def apply_changeset(
        self,
        changeset: ChangeSet,
        author: str,
        message: str,
        timestamp: str | None = None,
    ) -> CommitRecord:
        """Advance the snapshot one revision and append a journal record.

        Role enforcement (manager-only commits) lives in the update flow;
        this layer only guards structural validity.
        """
        with self._lock:
            snapshot = self._snapshot
            _validate_changeset(snapshot, changeset)
            commit_id = snapshot.revision + 1
            new_files = _apply_edits(snapshot.files, changeset.edits, commit_id)
            touched = {e.path for e in changeset.edits}
            added, deleted = _diff_counts(snapshot.files, new_files, touched)
            record = CommitRecord(
                commit_id=commit_id,
                author=author,
                timestamp=timestamp or now_rfc3339(),
                message=message,
                changeset=changeset,
                words_added=added,
                words_deleted=deleted,
            )
            journal_path = self.root / JOURNAL_NAME
            with journal_path.open("a", encoding="utf-8") as fh:
                fh.write(json.dumps(record.to_json(), ensure_ascii=False) + "\n")
            self._journal.append(record)
            self._snapshot = RepoSnapshot(commit_id, new_files)
            return record


def load_snapshot(root: Path | str) -> RepoSnapshot:
    """Load a repository directory and return its latest snapshot."""
    return RepoStore(root).snapshot
