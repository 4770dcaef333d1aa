"""Embedding index over document chunks with an answerability guard.

The index always corresponds to exactly one snapshot revision. Refresh
re-embeds only the chunks of files a commit touched, building the new index
aside and swapping it in atomically so readers never observe a partial
index.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .chunking import chunk_document
from .docstore import CommitRecord, DocChunk, RepoSnapshot
from .privacy import Roster, pseudonymize


class IndexStaleError(Exception):
    """Commit does not directly follow the indexed revision; rebuild instead."""


@dataclass(frozen=True)
class IndexEntry:
    chunk: DocChunk
    vector: np.ndarray


@dataclass(frozen=True)
class EmbeddingIndex:
    """One vector per chunk of the snapshot at ``indexed_revision``."""

    indexed_revision: int
    entries: dict[str, IndexEntry]

    def ordered(self) -> list[IndexEntry]:
        return sorted(
            self.entries.values(), key=lambda e: (e.chunk.path, e.chunk.span.start)
        )


@dataclass(frozen=True)
class ScoredChunk:
    chunk: DocChunk
    score: float


@dataclass(frozen=True)
class Verdict:
    """Answerable carries the chunks to cite; abstention carries related
    passages (possibly none) worth surfacing."""

    answerable: bool
    chunks: tuple[ScoredChunk, ...]


def rank(scored: list[ScoredChunk]) -> list[ScoredChunk]:
    """Descending score; ties broken by (path, span start) ascending."""
    return sorted(scored, key=lambda s: (-s.score, s.chunk.path, s.chunk.span.start))


def judge(scored: list[ScoredChunk], theta: float, cap: int = 3) -> Verdict:
    """Threshold rule deciding grounded answer vs abstention.

    Answerable iff the best score reaches theta (boundary inclusive);
    otherwise abstain, surfacing related chunks scoring at least theta/2.
    """
    if not 0 < theta < 1:
        raise ValueError(f"theta must lie in (0, 1), got {theta}")
    if scored and scored[0].score >= theta:
        return Verdict(True, tuple(scored[: min(cap, len(scored))]))
    return Verdict(False, tuple(s for s in scored if s.score >= theta / 2)[:cap])


class Retriever:
    """Owns the index plus the embedding path (pseudonymize, then embed)."""

    def __init__(self, provider, roster: Roster, max_chars: int = 2000):
        self.provider = provider
        self.roster = roster
        self.max_chars = max_chars
        self._lock = threading.Lock()
        self.index = EmbeddingIndex(0, {})

    def embed_text(self, text: str) -> np.ndarray:
        """Pseudonymize, then embed; the only path to the provider's embedder."""
        masked, _ = pseudonymize(text, self.roster)
        return self.provider.embed(masked)

    def _entries_for_file(self, snapshot: RepoSnapshot, path: str) -> dict[str, IndexEntry]:
        file = snapshot.files[path]
        return {
            chunk.chunk_id: IndexEntry(chunk, self.embed_text(chunk.body))
            for chunk in chunk_document(file, self.max_chars)
        }

    def build(self, snapshot: RepoSnapshot) -> EmbeddingIndex:
        """Full rebuild: one entry per chunk of the snapshot."""
        entries: dict[str, IndexEntry] = {}
        for path in snapshot.paths():
            entries.update(self._entries_for_file(snapshot, path))
        index = EmbeddingIndex(snapshot.revision, entries)
        with self._lock:
            self.index = index
        return index

    def refresh(self, commit: CommitRecord, snapshot: RepoSnapshot) -> EmbeddingIndex:
        """Re-embed only the files the commit touched; swap atomically."""
        current = self.index
        if commit.commit_id != current.indexed_revision + 1:
            raise IndexStaleError(
                f"cannot refresh from revision {current.indexed_revision} with commit "
                f"{commit.commit_id}; full rebuild required"
            )
        touched = set(commit.touched_paths())
        entries = {
            cid: entry
            for cid, entry in current.entries.items()
            if entry.chunk.path not in touched
        }
        for path in sorted(touched):
            if path in snapshot.files:
                entries.update(self._entries_for_file(snapshot, path))
        index = EmbeddingIndex(snapshot.revision, entries)
        with self._lock:
            self.index = index
        return index

    def search(self, query: str, k: int) -> list[ScoredChunk]:
        """The k most cosine-similar chunks, deterministically tie-broken."""
        if k < 1:
            raise ValueError("k must be >= 1")
        index = self.index
        ordered = index.ordered()
        if not ordered:
            return []
        qvec = self.embed_text(query)
        matrix = np.stack([e.vector for e in ordered])
        scores = _kernels.cosine_scores(matrix, qvec)
        scored = [ScoredChunk(e.chunk, float(s)) for e, s in zip(ordered, scores)]
        return rank(scored)[:k]
