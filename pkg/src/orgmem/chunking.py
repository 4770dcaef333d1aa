"""Markdown structure parsing: heading-delimited chunks and anchor links.

Chunks partition the file body exactly: spans are disjoint, ordered, and
their concatenation reproduces the body byte-for-byte. ATX headings open new
chunks; sections longer than ``max_chars`` are split at paragraph boundaries
(blank lines) and never mid-line. A single paragraph longer than the limit
stays whole.
"""

from __future__ import annotations

import re

from .docstore import DocChunk, DocumentFile, Span

MIN_MAX_CHARS = 200
DEFAULT_MAX_CHARS = 2000

_ATX_RE = re.compile(r"^(#{1,6})\s+(.*)$")
_BLANK_RE = re.compile(r"^[ \t]*$")


def _heading_title(rest: str) -> str:
    # Strip an optional closing hash sequence ("## Title ##").
    return re.sub(r"\s+#+\s*$", "", rest.strip())


def slugify(title: str) -> str:
    """Lowercase; runs of non-alphanumerics collapse to single hyphens."""
    slug = re.sub(r"[^a-z0-9]+", "-", title.lower())
    return slug.strip("-")


def anchor_link(chunk: DocChunk) -> str:
    """``path#slug`` for the chunk's innermost heading; bare path for preambles."""
    if not chunk.heading_path:
        return chunk.path
    return f"{chunk.path}#{slugify(chunk.heading_path[-1])}"


def _lines_with_offsets(body: str) -> list[tuple[int, str]]:
    """(start offset, line text without terminator) for every line."""
    out = []
    pos = 0
    for line in body.splitlines(keepends=True):
        out.append((pos, line.rstrip("\n")))
        pos += len(line)
    return out


def _sections(body: str) -> list[tuple[Span, tuple[str, ...]]]:
    """Split at ATX headings, tracking the enclosing-heading stack.

    Headings inside fenced code blocks do not open sections.
    """
    lines = _lines_with_offsets(body)
    boundaries: list[tuple[int, tuple[str, ...]]] = []
    stack: list[tuple[int, str]] = []
    in_fence = False
    for offset, text in lines:
        if text.lstrip().startswith(("```", "~~~")):
            in_fence = not in_fence
            continue
        if in_fence:
            continue
        match = _ATX_RE.match(text)
        if not match:
            continue
        level = len(match.group(1))
        title = _heading_title(match.group(2))
        while stack and stack[-1][0] >= level:
            stack.pop()
        stack.append((level, title))
        boundaries.append((offset, tuple(t for _, t in stack)))

    sections: list[tuple[Span, tuple[str, ...]]] = []
    if not boundaries or boundaries[0][0] > 0:
        end = boundaries[0][0] if boundaries else len(body)
        sections.append((Span(0, end), ()))
    for i, (start, heading_path) in enumerate(boundaries):
        end = boundaries[i + 1][0] if i + 1 < len(boundaries) else len(body)
        sections.append((Span(start, end), heading_path))
    return sections


def _paragraph_starts(body: str, span: Span) -> list[int]:
    """Offsets where a new paragraph begins inside the span (span.start first).

    A paragraph begins on the first non-blank line after a blank-line run;
    the run itself stays with the preceding paragraph so coverage holds.
    """
    starts = [span.start]
    in_blank_run = False
    pos = span.start
    while pos < span.end:
        nl = body.find("\n", pos, span.end)
        line_end = span.end if nl == -1 else nl + 1
        blank = _BLANK_RE.match(body[pos : nl if nl != -1 else span.end]) is not None
        if blank:
            in_blank_run = True
        else:
            if in_blank_run and pos != span.start:
                starts.append(pos)
            in_blank_run = False
        pos = line_end
    return starts


def _split_section(body: str, span: Span, max_chars: int) -> list[Span]:
    if span.end - span.start <= max_chars:
        return [span]
    starts = _paragraph_starts(body, span)
    pieces: list[Span] = []
    piece_start = span.start
    for i, start in enumerate(starts):
        end = starts[i + 1] if i + 1 < len(starts) else span.end
        if start != piece_start and end - piece_start > max_chars:
            pieces.append(Span(piece_start, start))
            piece_start = start
    pieces.append(Span(piece_start, span.end))
    return pieces


def chunk_document(file: DocumentFile, max_chars: int = DEFAULT_MAX_CHARS) -> list[DocChunk]:
    """Partition a Markdown file into heading-delimited chunks."""
    if max_chars < MIN_MAX_CHARS:
        raise ValueError(f"max_chars must be >= {MIN_MAX_CHARS}, got {max_chars}")
    body = file.body
    if not body:
        return []
    chunks: list[DocChunk] = []
    for span, heading_path in _sections(body):
        if span.start == span.end:
            continue
        for piece in _split_section(body, span, max_chars):
            chunks.append(
                DocChunk(
                    chunk_id=DocChunk.make_id(file.path, file.revision, piece),
                    path=file.path,
                    heading_path=heading_path,
                    body=body[piece.start : piece.end],
                    span=piece,
                    revision=file.revision,
                )
            )
    return chunks
