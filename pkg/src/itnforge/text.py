"""Tokens, sentences and the whitespace-first tokenizer shared by every stage."""

from __future__ import annotations

import enum
import unicodedata
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple


class TokenKind(enum.Enum):
    WORD = "Word"
    NUMBER = "Number"
    PUNCTUATION = "Punctuation"
    SYMBOL = "Symbol"


class SemioticClass(enum.Enum):
    CARDINAL = "Cardinal"
    ORDINAL = "Ordinal"
    FRACTION = "Fraction"
    DECIMAL = "Decimal"
    YEAR = "Year"
    DATE = "Date"
    TIME = "Time"
    CURRENCY = "Currency"
    PERCENT = "Percent"
    MEASURE = "Measure"
    PHONE = "Phone"
    PLAIN_WORD = "PlainWord"


# Split off the edges of a whitespace chunk. "$", "%" and other currency
# symbols are deliberately absent so "$5" and "4%" stay whole.
LEADING_PUNCT = frozenset('"([{')
TRAILING_PUNCT = frozenset('")]},.!?;:')

CLOSERS = frozenset([",", ".", "!", "?", ")", "]", "}", ";", ":"])
OPENERS = frozenset(["(", "[", "{"])
QUOTES = frozenset(['"'])


def is_punctuation(text: str) -> bool:
    return bool(text) and all(unicodedata.category(ch).startswith("P") for ch in text)


def _kind_of(surface: str) -> TokenKind:
    if is_punctuation(surface):
        return TokenKind.PUNCTUATION
    if any(ch.isdigit() for ch in surface):
        return TokenKind.NUMBER
    if all(unicodedata.category(ch)[0] in "SP" for ch in surface):
        return TokenKind.SYMBOL
    return TokenKind.WORD


@dataclass(frozen=True)
class Token:
    surface: str
    lower: str = field(init=False)
    kind: TokenKind = field(init=False)

    def __post_init__(self) -> None:
        if not self.surface or any(ch.isspace() for ch in self.surface):
            raise ValueError(f"invalid token surface: {self.surface!r}")
        object.__setattr__(self, "lower", self.surface.lower())
        object.__setattr__(self, "kind", _kind_of(self.surface))

    @property
    def is_punct(self) -> bool:
        return self.kind is TokenKind.PUNCTUATION

    def __str__(self) -> str:
        return self.surface


@dataclass(frozen=True)
class Sentence:
    tokens: Tuple[Token, ...]
    raw: str = ""

    def __len__(self) -> int:
        return len(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __getitem__(self, index):
        return self.tokens[index]

    @property
    def surfaces(self) -> List[str]:
        return [t.surface for t in self.tokens]

    @classmethod
    def from_surfaces(cls, surfaces: Iterable[str], raw: str | None = None) -> "Sentence":
        tokens = tuple(Token(s) for s in surfaces)
        return cls(tokens, raw if raw is not None else " ".join(t.surface for t in tokens))

    def without_punctuation(self) -> "Sentence":
        return Sentence(tuple(t for t in self.tokens if not t.is_punct), self.raw)


def _split_chunk(chunk: str) -> List[str]:
    head: List[str] = []
    tail: List[str] = []
    start, end = 0, len(chunk)
    while start < end and chunk[start] in LEADING_PUNCT:
        head.append(chunk[start])
        start += 1
    while end > start and chunk[end - 1] in TRAILING_PUNCT:
        tail.append(chunk[end - 1])
        end -= 1
    middle = [chunk[start:end]] if start < end else []
    return head + middle + tail[::-1]


def tokenize(text: str, split_punct: bool = True) -> Sentence:
    """Tokenize ``text`` on whitespace, then peel edge punctuation off each chunk.

    With ``split_punct=False`` the whitespace chunks are kept whole, which is
    the word definition used for WER scoring and ITN tagging of references.
    """
    surfaces: List[str] = []
    for chunk in text.split():
        surfaces.extend(_split_chunk(chunk) if split_punct else [chunk])
    return Sentence(tuple(Token(s) for s in surfaces), text)


def words(text: str) -> Sentence:
    return tokenize(text, split_punct=False)


def detokenize(tokens: Sentence | Sequence[Token] | Sequence[str]) -> str:
    """Join tokens with single spaces, re-attaching punctuation.

    Closers glue to the previous token, openers to the next one. A double
    quote alternates between opener and closer within the sentence.
    """
    if isinstance(tokens, Sentence):
        surfaces = tokens.surfaces
    else:
        surfaces = [t.surface if isinstance(t, Token) else t for t in tokens]
    out: List[str] = []
    glue_next = True
    quote_open = False
    for s in surfaces:
        if s in QUOTES:
            if quote_open:
                out.append(s)
                glue_next = False
            else:
                if not glue_next:
                    out.append(" ")
                out.append(s)
                glue_next = True
            quote_open = not quote_open
            continue
        if s in CLOSERS:
            out.append(s)
            glue_next = False
            continue
        if not glue_next:
            out.append(" ")
        out.append(s)
        glue_next = s in OPENERS
    return "".join(out)
