import string

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ideafeed.textproc import TokenList, byte_span, lemmatize, stopwords, tokenize

import oracles


def test_contraction_splits_and_flags_content():
    tl = tokenize("Let's go for some exercise.")
    assert list(tl.tokens) == ["let", "s", "go", "for", "some", "exercise"]
    assert list(tl.content_tokens) == ["go", "exercise"]


def test_blank_text_gives_empty_token_list():
    tl = tokenize("")
    assert len(tl) == 0
    assert tl.content_tokens == ()


def test_punctuation_only_gives_empty_token_list():
    assert len(tokenize("?!... --- ;;;")) == 0


def test_case_folding_and_punctuation_strip():
    assert list(tokenize("Exercise exercise!").tokens) == ["exercise", "exercise"]


def test_spans_point_back_into_text():
    text = "Take a brisk Walk, twice."
    tl = tokenize(text)
    for tok, (start, end) in zip(tl.tokens, tl.spans):
        assert text[start:end].lower() == tok


def test_byte_span_counts_utf8_bytes():
    text = "café run"
    tl = tokenize(text)
    assert tl.tokens == ("café", "run")
    b0, b1 = byte_span(text, tl.spans[1])
    assert text.encode("utf-8")[b0:b1] == b"run"


def test_mask_and_spans_align():
    tl = tokenize("Walk the dog tonight")
    assert len(tl.tokens) == len(tl.content_mask) == len(tl.spans)


def test_token_list_rejects_misaligned_fields():
    with pytest.raises(ValueError):
        TokenList(("a",), (True, False), ((0, 1),))


def test_stopword_list_is_reasonably_sized():
    stops = stopwords()
    assert 100 <= len(stops) <= 200
    assert "the" in stops and "to" in stops
    assert "exercise" not in stops


@pytest.mark.parametrize(
    "word,lemma",
    [
        ("walking", "walk"),
        ("walks", "walk"),
        ("walked", "walk"),
        ("stairs", "stair"),
        ("running", "run"),
        ("exercise", "exercise"),
        ("feet", "foot"),
    ],
)
def test_lemmatize_common_forms(word, lemma):
    assert lemmatize(word) == lemma


@given(st.text(max_size=200))
def test_tokenizer_matches_simple_oracle(text):
    tl = tokenize(text)
    assert list(tl.tokens) == oracles.simple_tokens(text)
    assert list(tl.content_tokens) == oracles.content_tokens(text)


@given(st.text(alphabet=string.ascii_letters + " .,!'", max_size=120))
def test_tokens_never_contain_punctuation(text):
    for tok in tokenize(text).tokens:
        assert tok == tok.lower()
        assert all(ch.isalnum() for ch in tok)
