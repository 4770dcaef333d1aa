"""Remote profile: request shapes, tolerant parsing, error mapping."""

from __future__ import annotations

import threading

import pytest
import requests

from orgmem.provider import (
    Intent,
    ProviderError,
    PromptTemplates,
    RemoteProfile,
    RemoteProvider,
)


class FakeResponse:
    def __init__(self, data: dict, status: int = 200):
        self._data = data
        self.status_code = status

    def raise_for_status(self):
        if self.status_code >= 400:
            raise requests.HTTPError(f"status {self.status_code}")

    def json(self):
        return self._data


class FakeSession:
    def __init__(self, responses):
        self.responses = list(responses)
        self.requests: list[tuple[str, dict]] = []
        self.headers: dict[str, str] = {}
        self.concurrent = 0
        self.max_concurrent = 0
        self._lock = threading.Lock()

    def post(self, url, json=None, timeout=None):
        with self._lock:
            self.concurrent += 1
            self.max_concurrent = max(self.max_concurrent, self.concurrent)
        try:
            self.requests.append((url, json))
            result = self.responses.pop(0)
            if isinstance(result, Exception):
                raise result
            return result
        finally:
            with self._lock:
                self.concurrent -= 1


def make_provider(responses, **profile_kwargs) -> tuple[RemoteProvider, FakeSession]:
    provider = RemoteProvider(
        RemoteProfile(endpoint="https://llm.example/v1", **profile_kwargs)
    )
    session = FakeSession(responses)
    provider._session = session
    return provider, session


def test_bearer_token_from_named_env_var(monkeypatch):
    monkeypatch.setenv("CUSTOM_TOKEN_VAR", "sekrit")
    provider = RemoteProvider(
        RemoteProfile(endpoint="https://llm.example", token_env="CUSTOM_TOKEN_VAR")
    )
    assert provider._session.headers["Authorization"] == "Bearer sekrit"


def test_embed_parses_openai_style_and_normalizes():
    provider, session = make_provider(
        [FakeResponse({"data": [{"embedding": [3.0, 4.0]}], "extra": "ignored"})]
    )
    vec = provider.embed("hello")
    assert vec.tolist() == [0.6, 0.8]
    url, body = session.requests[0]
    assert url.endswith("/embeddings")
    assert body == {"model": "text-embedding-3-small", "input": "hello"}


def test_embed_parses_bare_embedding_field():
    provider, _ = make_provider([FakeResponse({"embedding": [1.0, 0.0]})])
    assert provider.embed("x").tolist() == [1.0, 0.0]


def test_completion_request_uses_template_and_messages_shape():
    provider, session = make_provider(
        [FakeResponse({"choices": [{"message": {"content": "question"}}]})]
    )
    intent = provider.classify_intent("Where are the forms?")
    assert intent is Intent.QUESTION
    _, body = session.requests[0]
    assert body["model"] == "gpt-4o-mini"
    assert body["messages"][0]["role"] == "user"
    assert "Where are the forms?" in body["messages"][0]["content"]


def test_compose_answer_fills_question_and_chunks():
    provider, session = make_provider(
        [FakeResponse({"choices": [{"message": {"content": "grounded answer"}}]})]
    )
    draft = provider.compose_answer("q?", [("c1", "body one"), ("c2", "body two")])
    assert draft.text == "grounded answer"
    assert draft.chunk_ids == ("c1", "c2")
    _, body = session.requests[0]
    prompt = body["messages"][0]["content"]
    assert "q?" in prompt and "body one" in prompt and "body two" in prompt


def test_transport_error_is_retryable():
    provider, _ = make_provider([requests.ConnectionError("refused")])
    with pytest.raises(ProviderError) as excinfo:
        provider.embed("x")
    assert excinfo.value.retryable


def test_http_error_is_retryable():
    provider, _ = make_provider([FakeResponse({}, status=502)])
    with pytest.raises(ProviderError) as excinfo:
        provider.embed("x")
    assert excinfo.value.retryable


def test_malformed_response_is_retryable():
    provider, _ = make_provider([FakeResponse({"unexpected": True})])
    with pytest.raises(ProviderError) as excinfo:
        provider.classify_intent("x")
    assert excinfo.value.retryable


def test_in_flight_requests_bounded():
    barrier_responses = [
        FakeResponse({"choices": [{"message": {"content": "chatter"}}]}) for _ in range(8)
    ]
    provider, session = make_provider(barrier_responses, max_in_flight=2)

    # The fake session tracks peak concurrency across 8 threads.
    threads = [
        threading.Thread(target=lambda: provider.classify_intent("hello there"))
        for _ in range(8)
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert session.max_concurrent <= 2


def test_templates_loaded_from_directory(tmp_path):
    for name in PromptTemplates.NAMES:
        (tmp_path / f"{name}.txt").write_text(f"custom {name} {{{{question}}}}")
    templates = PromptTemplates.load(tmp_path)
    assert templates.classify.startswith("custom classify")
