"""Language-model and embedding interface.

Two profiles share one surface: a fully deterministic mock (the normative,
offline-testable behavior) and a remote HTTP profile using configurable
prompt templates. Callers pseudonymize all inputs first; the
:class:`RecordingProvider` wrapper captures every provider-bound payload
for the audit log so that boundary can be checked after the fact.
"""

from __future__ import annotations

import re
import zlib
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

DEFAULT_DIM = 256

UPDATE_MARKERS = ("update", "save this", "document this", "add this")
QUESTION_LEADS = {
    "who", "what", "when", "where", "why", "how",
    "can", "could", "does", "do", "is", "are", "should",
}
GREETING_TOKENS = {"hi", "hey", "hello", "thanks", "thank"}
MIN_KNOWLEDGE_TOKENS = 8


class Intent(str, Enum):
    QUESTION = "question"
    UPDATE_REQUEST = "update_request"
    CHATTER = "chatter"


class ProviderError(Exception):
    """Provider call failed; retryable errors left no partial state behind."""

    def __init__(self, message: str, retryable: bool = False):
        super().__init__(message)
        self.retryable = retryable


@dataclass(frozen=True)
class AnswerDraft:
    text: str
    chunk_ids: tuple[str, ...]


@dataclass(frozen=True)
class WindowMessage:
    author: str
    text: str
    is_bot: bool = False

    def to_json(self) -> dict:
        return {"author": self.author, "text": self.text, "bot": self.is_bot}


@dataclass(frozen=True)
class WindowPayload:
    """Pseudonymized conversation window as sent to the provider."""

    messages: tuple[WindowMessage, ...]
    mention: WindowMessage | None = None
    anchor_question: WindowMessage | None = None
    anchor_answer: WindowMessage | None = None

    def to_json(self) -> dict:
        return {
            "messages": [m.to_json() for m in self.messages],
            "mention": self.mention.to_json() if self.mention else None,
            "anchor_question": self.anchor_question.to_json() if self.anchor_question else None,
            "anchor_answer": self.anchor_answer.to_json() if self.anchor_answer else None,
        }

    def candidates(self) -> list[WindowMessage]:
        out = []
        if self.anchor_question:
            out.append(self.anchor_question)
        if self.anchor_answer:
            out.append(self.anchor_answer)
        out.extend(self.messages)
        if self.mention:
            out.append(self.mention)
        return out


_TOKEN_RE = re.compile(r"[a-z0-9]+")


def _tokens(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


def _first_word(text: str) -> str:
    words = _tokens(text)
    return words[0] if words else ""


class MockProvider:
    """Deterministic provider: every operation is a pure function of input."""

    def __init__(self, dim: int = DEFAULT_DIM):
        if dim < 1:
            raise ValueError("embedding dimension must be positive")
        self.dim = dim

    def embed(self, text: str) -> np.ndarray:
        """Hashing bag-of-words, L2-normalized; empty text is the zero vector."""
        vec = np.zeros(self.dim, dtype=np.float64)
        toks = _tokens(text)
        if not toks:
            return vec
        buckets = np.fromiter(
            (zlib.crc32(t.encode("utf-8")) % self.dim for t in toks),
            dtype=np.int64,
            count=len(toks),
        )
        counts = np.bincount(buckets, minlength=self.dim).astype(np.float64)
        return counts / np.linalg.norm(counts)

    def classify_intent(self, text: str) -> Intent:
        lowered = text.lower()
        if any(marker in lowered for marker in UPDATE_MARKERS):
            return Intent.UPDATE_REQUEST
        if text.rstrip().endswith("?") or _first_word(text) in QUESTION_LEADS:
            return Intent.QUESTION
        return Intent.CHATTER

    def compose_answer(self, question: str, chunks: list[tuple[str, str]]) -> AnswerDraft:
        if not chunks:
            raise ValueError("compose_answer requires at least one chunk")
        top_body = chunks[0][1]
        return AnswerDraft(
            text="Based on the documentation: " + _first_paragraph(top_body),
            chunk_ids=tuple(cid for cid, _ in chunks),
        )

    def extract_knowledge(self, window: WindowPayload) -> str:
        kept = []
        for msg in window.candidates():
            if msg.is_bot:
                continue
            if _first_word(msg.text) in GREETING_TOKENS:
                continue
            if len(msg.text.split()) < MIN_KNOWLEDGE_TOKENS:
                continue
            kept.append(msg.text)
        return "\n\n".join(kept)

    def propose_edit(self, section: str, suggestion: str) -> str:
        if not suggestion.strip():
            raise ValueError("nothing to propose")
        base = section.rstrip("\n")
        tail = section[len(base):]
        return base + "\n\n" + suggestion + tail


_HEADING_LINE_RE = re.compile(r"^#{1,6}\s")


def _first_paragraph(body: str) -> str:
    """First blank-line-delimited block, skipping heading-only lines."""
    blocks = [b.strip() for b in re.split(r"\n[ \t]*\n", body) if b.strip()]
    if not blocks:
        return ""
    for block in blocks:
        lines = [ln for ln in block.splitlines() if not _HEADING_LINE_RE.match(ln)]
        if lines:
            return "\n".join(lines).strip()
    return blocks[0]


@dataclass
class PromptTemplates:
    """Plain-text templates with {{placeholder}} slots."""

    question_answer: str
    classify: str
    extract: str
    propose: str

    NAMES = ("question_answer", "classify", "extract", "propose")

    @classmethod
    def load(cls, directory: Path | str) -> "PromptTemplates":
        directory = Path(directory)
        values = {}
        for name in cls.NAMES:
            values[name] = (directory / f"{name}.txt").read_text(encoding="utf-8")
        return cls(**values)

    @classmethod
    def default(cls) -> "PromptTemplates":
        return cls.load(Path(__file__).parent / "templates")


def fill_template(template: str, **slots: str) -> str:
    def sub(match: re.Match) -> str:
        return slots.get(match.group(1), match.group(0))

    return re.sub(r"\{\{(\w+)\}\}", sub, template)


@dataclass
class RemoteProfile:
    endpoint: str
    model: str = "gpt-4o-mini"
    embed_model: str = "text-embedding-3-small"
    token_env: str = "ORGMEM_PROVIDER_TOKEN"
    timeout: float = 30.0
    max_in_flight: int = 4
    templates: PromptTemplates = field(default_factory=PromptTemplates.default)


class RemoteProvider:
    """HTTP profile: JSON POST bodies, bearer auth, tolerant response parsing.

    In-flight requests are bounded by a semaphore; transport and timeout
    failures surface as retryable provider errors and never leave partial
    state anywhere.
    """

    def __init__(self, profile: RemoteProfile):
        import os
        import threading

        import requests

        self.profile = profile
        self._session = requests.Session()
        self._slots = threading.BoundedSemaphore(max(1, profile.max_in_flight))
        token = os.environ.get(profile.token_env, "")
        if token:
            self._session.headers["Authorization"] = f"Bearer {token}"

    def _post(self, path: str, body: dict) -> dict:
        import requests

        url = self.profile.endpoint.rstrip("/") + path
        with self._slots:
            try:
                resp = self._session.post(url, json=body, timeout=self.profile.timeout)
                resp.raise_for_status()
                return resp.json()
            except requests.RequestException as exc:
                raise ProviderError(f"provider request failed: {exc}", retryable=True) from exc

    def _complete(self, prompt: str) -> str:
        data = self._post(
            "/chat/completions",
            {"model": self.profile.model, "messages": [{"role": "user", "content": prompt}]},
        )
        try:
            if "choices" in data:
                return data["choices"][0]["message"]["content"]
            return data["output"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"malformed completion response: {exc}", retryable=True) from exc

    def embed(self, text: str) -> np.ndarray:
        data = self._post("/embeddings", {"model": self.profile.embed_model, "input": text})
        try:
            if "data" in data:
                values = data["data"][0]["embedding"]
            else:
                values = data["embedding"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderError(f"malformed embedding response: {exc}", retryable=True) from exc
        vec = np.asarray(values, dtype=np.float64)
        norm = np.linalg.norm(vec)
        return vec / norm if norm else vec

    def classify_intent(self, text: str) -> Intent:
        reply = self._complete(fill_template(self.profile.templates.classify, message=text))
        lowered = reply.strip().lower()
        if "update" in lowered:
            return Intent.UPDATE_REQUEST
        if "question" in lowered:
            return Intent.QUESTION
        return Intent.CHATTER

    def compose_answer(self, question: str, chunks: list[tuple[str, str]]) -> AnswerDraft:
        if not chunks:
            raise ValueError("compose_answer requires at least one chunk")
        rendered = "\n\n".join(body for _, body in chunks)
        prompt = fill_template(
            self.profile.templates.question_answer, question=question, chunks=rendered
        )
        return AnswerDraft(text=self._complete(prompt), chunk_ids=tuple(c for c, _ in chunks))

    def extract_knowledge(self, window: WindowPayload) -> str:
        lines = [f"{m.author}: {m.text}" for m in window.candidates()]
        prompt = fill_template(self.profile.templates.extract, window="\n".join(lines))
        return self._complete(prompt).strip()

    def propose_edit(self, section: str, suggestion: str) -> str:
        if not suggestion.strip():
            raise ValueError("nothing to propose")
        prompt = fill_template(
            self.profile.templates.propose, section=section, suggestion=suggestion
        )
        return self._complete(prompt)


class RecordingProvider:
    """Delegates to a provider, reporting each payload to a recorder callback.

    The recorder sees exactly what the provider sees, which is what the
    privacy boundary check scans.
    """

    def __init__(self, inner, recorder):
        self.inner = inner
        self._recorder = recorder

    def embed(self, text: str) -> np.ndarray:
        self._recorder("embed", {"text": text})
        return self.inner.embed(text)

    def classify_intent(self, text: str) -> Intent:
        self._recorder("classify_intent", {"text": text})
        return self.inner.classify_intent(text)

    def compose_answer(self, question: str, chunks: list[tuple[str, str]]) -> AnswerDraft:
        self._recorder(
            "compose_answer",
            {"question": question, "chunks": [{"chunk_id": c, "body": b} for c, b in chunks]},
        )
        return self.inner.compose_answer(question, chunks)

    def extract_knowledge(self, window: WindowPayload) -> str:
        self._recorder("extract_knowledge", window.to_json())
        return self.inner.extract_knowledge(window)

    def propose_edit(self, section: str, suggestion: str) -> str:
        self._recorder("propose_edit", {"section": section, "suggestion": suggestion})
        return self.inner.propose_edit(section, suggestion)
