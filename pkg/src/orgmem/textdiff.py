"""Word-level diff built on an LCS alignment.

A "word" is a maximal non-whitespace run; Markdown syntax characters count
as part of words. Counts satisfy added + common == len(new words) and
deleted + common == len(old words) for the optimal alignment.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels

EQUAL = "equal"
INSERT = "insert"
DELETE = "delete"


@dataclass(frozen=True)
class DiffSegment:
    """A run of consecutive words sharing one diff op."""

    op: str  # equal | insert | delete
    text: str

    def to_json(self) -> dict:
        return {"op": self.op, "text": self.text}


@dataclass(frozen=True)
class WordDiff:
    added: int
    deleted: int
    segments: tuple[DiffSegment, ...]


def _token_ids(old_words: list[str], new_words: list[str]) -> tuple[np.ndarray, np.ndarray]:
    ids: dict[str, int] = {}
    for w in old_words:
        ids.setdefault(w, len(ids))
    for w in new_words:
        ids.setdefault(w, len(ids))
    a = np.fromiter((ids[w] for w in old_words), dtype=np.int32, count=len(old_words))
    b = np.fromiter((ids[w] for w in new_words), dtype=np.int32, count=len(new_words))
    return a, b


def word_diff(old: str, new: str) -> WordDiff:
    """Diff two texts at word granularity using an LCS alignment."""
    old_words = old.split()
    new_words = new.split()
    if not old_words and not new_words:
        return WordDiff(0, 0, ())
    if not old_words:
        return WordDiff(len(new_words), 0, (DiffSegment(INSERT, " ".join(new_words)),))
    if not new_words:
        return WordDiff(0, len(old_words), (DiffSegment(DELETE, " ".join(old_words)),))

    a, b = _token_ids(old_words, new_words)
    table = _kernels.lcs_table(a, b)
    ops = _kernels.lcs_backtrack(a, b, table)

    segments: list[DiffSegment] = []
    run_op: int | None = None
    run_words: list[str] = []
    op_names = {0: EQUAL, 1: DELETE, 2: INSERT}
    added = deleted = 0
    for op, idx in ops:
        word = old_words[idx] if op in (0, 1) else new_words[idx]
        if op == 1:
            deleted += 1
        elif op == 2:
            added += 1
        if op != run_op and run_words:
            segments.append(DiffSegment(op_names[run_op], " ".join(run_words)))
            run_words = []
        run_op = op
        run_words.append(word)
    if run_words:
        segments.append(DiffSegment(op_names[run_op], " ".join(run_words)))
    return WordDiff(added, deleted, tuple(segments))


def word_count(text: str) -> int:
    """Number of maximal non-whitespace runs."""
    return len(text.split())
