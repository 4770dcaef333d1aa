"""Word diff against an independent dynamic-programming LCS oracle."""

from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from orgmem.textdiff import DELETE, EQUAL, INSERT, word_diff


def lcs_length_oracle(a: list[str], b: list[str]) -> int:
    """Textbook O(n*m) LCS table, independent of the kernel implementation."""
    prev = [0] * (len(b) + 1)
    for i in range(len(a) - 1, -1, -1):
        cur = [0] * (len(b) + 1)
        for j in range(len(b) - 1, -1, -1):
            if a[i] == b[j]:
                cur[j] = prev[j + 1] + 1
            else:
                cur[j] = max(prev[j], cur[j + 1])
        prev = cur
    return prev[0]


def test_identical_texts_have_no_spans():
    diff = word_diff("x", "x")
    assert (diff.added, diff.deleted) == (0, 0)
    assert all(seg.op == EQUAL for seg in diff.segments)


def test_empty_old_is_one_insertion_span():
    diff = word_diff("", "a b")
    assert (diff.added, diff.deleted) == (2, 0)
    assert [seg.op for seg in diff.segments] == [INSERT]
    assert diff.segments[0].text == "a b"


def test_both_empty():
    assert word_diff("", "") == word_diff("", "")
    assert word_diff("", "").segments == ()


def test_random_30_word_pair_matches_lcs_oracle():
    rng = random.Random(7)
    vocab = [f"w{i}" for i in range(12)]
    for _ in range(50):
        old = [rng.choice(vocab) for _ in range(30)]
        new = [rng.choice(vocab) for _ in range(30)]
        diff = word_diff(" ".join(old), " ".join(new))
        common = lcs_length_oracle(old, new)
        assert diff.added == len(new) - common
        assert diff.deleted == len(old) - common


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.sampled_from("abcde"), max_size=40),
    st.lists(st.sampled_from("abcde"), max_size=40),
)
def test_counts_match_oracle_and_segments_reconstruct(old_words, new_words):
    old = " ".join(old_words)
    new = " ".join(new_words)
    diff = word_diff(old, new)
    common = lcs_length_oracle(old_words, new_words)
    assert diff.added == len(new_words) - common
    assert diff.deleted == len(old_words) - common
    rebuilt_new = " ".join(
        seg.text for seg in diff.segments if seg.op in (EQUAL, INSERT)
    ).split()
    rebuilt_old = " ".join(
        seg.text for seg in diff.segments if seg.op in (EQUAL, DELETE)
    ).split()
    assert rebuilt_new == new_words
    assert rebuilt_old == old_words


@settings(max_examples=100, deadline=None)
@given(st.text("ab \n", max_size=60), st.text("ab \n", max_size=60))
def test_diff_symmetry(a, b):
    assert word_diff(a, b).added == word_diff(b, a).deleted
    assert word_diff(a, b).deleted == word_diff(b, a).added
