import pytest
from hypothesis import given, strategies as st

from itnforge.text import Sentence, Token, TokenKind, detokenize, is_punctuation, tokenize, words


@pytest.mark.parametrize("surface,kind", [
    ("hello", TokenKind.WORD),
    ("20", TokenKind.NUMBER),
    ("$20", TokenKind.NUMBER),
    (",", TokenKind.PUNCTUATION),
    ('"', TokenKind.PUNCTUATION),
    ("+", TokenKind.SYMBOL),
    ("o'clock", TokenKind.WORD),
])
def test_token_kind(surface, kind):
    assert Token(surface).kind is kind


def test_token_rejects_whitespace_and_empty():
    with pytest.raises(ValueError):
        Token("")
    with pytest.raises(ValueError):
        Token("a b")


def test_tokenize_peels_edge_punctuation_only():
    s = tokenize('He said, "hello" (twice) at 4:30.')
    assert s.surfaces == ["He", "said", ",", '"', "hello", '"', "(", "twice", ")", "at", "4:30", "."]


def test_currency_and_percent_stay_attached():
    assert tokenize("$5 and 4%.").surfaces == ["$5", "and", "4%", "."]


def test_words_keeps_whitespace_chunks():
    assert words("October 20, 2020").surfaces == ["October", "20,", "2020"]


def test_without_punctuation():
    s = tokenize("a, b!")
    assert s.without_punctuation().surfaces == ["a", "b"]


@pytest.mark.parametrize("text", [
    'he said, "hello"',
    "October 20, 2020.",
    "call (555) now!",
    'a "b" c "d".',
    "x; y: z?",
])
def test_detokenize_inverts_tokenize(text):
    assert detokenize(tokenize(text)) == text


def test_is_punctuation():
    assert is_punctuation(",")
    assert is_punctuation("...")
    assert not is_punctuation("$")
    assert not is_punctuation("")


@given(st.lists(st.sampled_from(["a", "bb", "7", "$3", ",", ".", "?", "(", ")", '"', "x"]), max_size=12))
def test_tokenize_of_detokenize_keeps_word_tokens(surfaces):
    s = Sentence.from_surfaces(surfaces)
    again = tokenize(detokenize(s))
    assert [t for t in again.surfaces if not is_punctuation(t)] == [t for t in surfaces if not is_punctuation(t)]
