"""Mock provider contract: embeddings, intent, composition, extraction."""

from __future__ import annotations

import numpy as np
import pytest

from orgmem.provider import (
    Intent,
    MockProvider,
    PromptTemplates,
    WindowMessage,
    WindowPayload,
    fill_template,
)


@pytest.fixture
def provider() -> MockProvider:
    return MockProvider()


class TestEmbed:
    def test_empty_text_is_zero_vector(self, provider):
        assert not provider.embed("").any()

    def test_deterministic(self, provider):
        a = provider.embed("travel reimbursement policy")
        b = provider.embed("travel reimbursement policy")
        assert np.array_equal(a, b)

    def test_bag_of_words_order_invariance(self, provider):
        a = provider.embed("travel reimbursement")
        b = provider.embed("reimbursement travel")
        assert a @ b == pytest.approx(1.0)

    def test_unit_norm_unless_empty(self, provider):
        assert np.linalg.norm(provider.embed("some words here")) == pytest.approx(1.0)

    def test_punctuation_only_is_zero_vector(self, provider):
        assert not provider.embed("?!...").any()


class TestClassify:
    def test_reimbursement_question(self, provider):
        text = "How do I request reimbursement for conference travel?"
        assert provider.classify_intent(text) is Intent.QUESTION

    def test_citi_question(self, provider):
        assert (
            provider.classify_intent("Can you tell how CITI training can be completed?")
            is Intent.QUESTION
        )

    def test_document_this_is_update_request(self, provider):
        assert (
            provider.classify_intent("please document this in the handbook")
            is Intent.UPDATE_REQUEST
        )

    def test_update_marker_beats_question_shape(self, provider):
        assert provider.classify_intent("can you update the handbook?") is Intent.UPDATE_REQUEST

    def test_question_mark_suffix(self, provider):
        assert provider.classify_intent("lab meeting time?") is Intent.QUESTION

    def test_leading_question_word_without_mark(self, provider):
        assert provider.classify_intent("when is the next seminar") is Intent.QUESTION

    def test_chatter(self, provider):
        assert provider.classify_intent("nice weather today") is Intent.CHATTER


class TestComposeAnswer:
    def test_answer_is_first_paragraph_of_top_chunk(self, provider):
        draft = provider.compose_answer("q", [("c1", "Para1.\n\nPara2.")])
        assert draft.text.endswith("Para1.")
        assert draft.text.startswith("Based on the documentation: ")

    def test_chunk_ids_preserved_in_order(self, provider):
        draft = provider.compose_answer("q", [("c2", "x"), ("c1", "y"), ("c3", "z")])
        assert draft.chunk_ids == ("c2", "c1", "c3")

    def test_deterministic(self, provider):
        args = ("q", [("c1", "Body text here.")])
        assert provider.compose_answer(*args) == provider.compose_answer(*args)

    def test_heading_only_block_skipped(self, provider):
        draft = provider.compose_answer("q", [("c1", "## Travel\n\nSubmit the form.")])
        assert draft.text == "Based on the documentation: Submit the form."

    def test_empty_chunks_is_caller_bug(self, provider):
        with pytest.raises(ValueError):
            provider.compose_answer("q", [])


def window(*messages: WindowMessage, mention=None, anchor_q=None, anchor_a=None) -> WindowPayload:
    return WindowPayload(
        messages=tuple(messages),
        mention=mention,
        anchor_question=anchor_q,
        anchor_answer=anchor_a,
    )


class TestExtractKnowledge:
    def test_greeting_only_window_is_empty(self, provider):
        out = provider.extract_knowledge(window(WindowMessage("Member-01", "thanks everyone!")))
        assert out == ""

    def test_policy_statement_kept_verbatim(self, provider):
        statement = "Stipends for new group members are paid on the first of September."
        assert len(statement.split()) >= 8
        out = provider.extract_knowledge(window(WindowMessage("Member-01", statement)))
        assert out == statement

    def test_mixed_window_matches_hand_applied_filter(self, provider):
        msgs = [
            WindowMessage("Member-01", "hey all"),  # greeting
            WindowMessage("Member-02", "The travel form needs receipts attached within thirty days."),
            WindowMessage("Member-01", "ok sounds good"),  # < 8 tokens
            WindowMessage("assistant", "Automated reply with plenty of tokens inside it, truly.", is_bot=True),
            WindowMessage("Member-03", "Thanks, that is exactly what I needed to know today."),  # greeting lead
            WindowMessage("Member-02", "Equipment bookings must go through the shared booking sheet now."),
        ]
        # Hand-applied filter: keep non-bot, non-greeting, >= 8 token messages.
        expected = "\n\n".join([msgs[1].text, msgs[5].text])
        assert provider.extract_knowledge(window(*msgs)) == expected

    def test_short_messages_filtered(self, provider):
        out = provider.extract_knowledge(window(WindowMessage("Member-01", "seven words is not quite enough here")))
        assert out == ""

    def test_mention_text_counts_as_candidate(self, provider):
        mention = WindowMessage(
            "Member-01", "@bot please document this: lab meetings are Fridays"
        )
        assert provider.extract_knowledge(window(mention=mention)) == mention.text


class TestProposeEdit:
    def test_append_only(self, provider):
        assert provider.propose_edit("A.", "B.") == "A.\n\nB."

    def test_trailing_newline_preserved(self, provider):
        assert provider.propose_edit("A.\n", "B.") == "A.\n\nB.\n"

    def test_empty_suggestion_rejected(self, provider):
        with pytest.raises(ValueError, match="nothing to propose"):
            provider.propose_edit("A.", "   ")


def test_fill_template():
    out = fill_template("Q: {{question}} | {{chunks}} | {{missing}}", question="x", chunks="y")
    assert out == "Q: x | y | {{missing}}"


def test_default_templates_have_expected_slots():
    templates = PromptTemplates.default()
    assert "{{question}}" in templates.question_answer
    assert "{{chunks}}" in templates.question_answer
    assert "{{message}}" in templates.classify
    assert "{{window}}" in templates.extract
    assert "{{section}}" in templates.propose
    assert "{{suggestion}}" in templates.propose
