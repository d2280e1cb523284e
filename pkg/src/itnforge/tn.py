"""Written-form to spoken-form normalization, used to manufacture parallel data.

The verbalizer always picks one fixed reading per entity (compositional
numbers, paired years); variety is added later by :mod:`itnforge.datagen`.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass
from decimal import Decimal
from typing import List, Optional, Sequence, Tuple

from . import numbers as num
from .grammar import Grammar
from .numbers import NumberStyle
from .text import SemioticClass, Sentence, Token, TokenKind, detokenize, tokenize

C = SemioticClass

_INT = re.compile(r"^-?\d+$")
_GROUPED_INT = re.compile(r"^\d{1,3}(?:,\d{3})+$")
_DECIMAL = re.compile(r"^-?\d+\.\d+$")
_CURRENCY = re.compile(r"^(-?)([^\w\s\d.,-])((?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?)$")
_PERCENT = re.compile(r"^(-?\d+(?:\.\d+)?)%$")
_ORDINAL = re.compile(r"^(\d+)(st|nd|rd|th)$", re.IGNORECASE)
_FRACTION = re.compile(r"^(\d+)/(\d+)$")
_TIME = re.compile(r"^(\d{1,2}):(\d{2})$")
_PHONE = re.compile(r"^\d+(?:-\d+)+$")
_DIGITS = re.compile(r"(\d+)")
_GROUP_SEP = re.compile(r"(?<=\d),(?=\d{3}\b)")

MERIDIEM_WRITTEN = {"am": ["a", "m"], "pm": ["p", "m"]}


class NotAnAbbreviation(KeyError):
    pass


@dataclass(frozen=True)
class Expansion:
    """Written tokens ``[start, end)`` became the spoken words from ``spoken_start`` on."""

    start: int
    end: int
    written: str
    spoken: str
    rule: str
    spoken_start: int = 0

    @property
    def spoken_end(self) -> int:
        return self.spoken_start + len(self.spoken.split())


@dataclass(frozen=True)
class TnResult:
    spoken: Sentence
    removed_punct: Tuple[Tuple[int, str], ...]
    expansions: Tuple[Expansion, ...]

    @property
    def text(self) -> str:
        return " ".join(self.spoken.surfaces)

    @property
    def entity_classes(self) -> List[SemioticClass]:
        return [C(e.rule) for e in self.expansions if e.rule in _CLASS_VALUES]


_CLASS_VALUES = {c.value for c in SemioticClass}


def _is_capitalized(tok: Optional[Token]) -> bool:
    return tok is not None and tok.kind is TokenKind.WORD and tok.surface[:1].isupper()


def expand_abbreviation(g: Grammar, token: Token | str, left_context: Optional[Token] = None,
                        right_context: Optional[Token] = None) -> str:
    """Pick the context-appropriate expansion of a known abbreviation.

    >>> expand_abbreviation(default_grammar(), "dr.", right_context=Token("john"))
    'doctor'
    """
    key = (token.surface if isinstance(token, Token) else token).lower()
    rules = g.abbreviations.get(key)
    if not rules:
        raise NotAnAbbreviation(key)
    left_word = left_context if left_context is not None and not left_context.is_punct else None
    right_word = right_context if right_context is not None and not right_context.is_punct else None
    checks = {
        "always": True,
        "right_capitalized": _is_capitalized(right_word),
        "left_capitalized": _is_capitalized(left_word),
        "sentence_initial": left_word is None,
        "sentence_final": right_word is None,
    }
    for rule in rules:
        if checks[rule.when]:
            return rule.expansion
    return rules[0].expansion


def _amount_words(text: str) -> List[str]:
    value = Decimal(text)
    style = NumberStyle.DECIMAL if "." in text else NumberStyle.COMPOSITIONAL
    return num.verbalize_cardinal(value, style)


def _hour_minute_words(hour: int, minute: int, meridiem: Optional[str]) -> Optional[List[str]]:
    if not 1 <= hour <= 12 or not 0 <= minute <= 59:
        return None
    words = [num.UNITS[hour]]
    if minute == 0:
        if meridiem is None:
            words.append("o'clock")
    elif minute < 10:
        words += ["oh", num.UNITS[minute]]
    else:
        words += num.integer_words(minute)
    if meridiem is not None:
        words += MERIDIEM_WRITTEN[meridiem]
    return words


class _Normalizer:
    def __init__(self, g: Grammar, tokens: Sequence[Token]):
        self.g = g
        self.tokens = tokens

    def tok(self, i: int) -> Optional[Token]:
        return self.tokens[i] if 0 <= i < len(self.tokens) else None

    def surface(self, i: int) -> Optional[str]:
        t = self.tok(i)
        return t.surface if t is not None else None

    def _int_token(self, i: int, lo: int, hi: int) -> Optional[int]:
        s = self.surface(i)
        if s is not None and s.isdigit() and lo <= int(s) <= hi and not s.startswith("0"):
            return int(s)
        return None

    def date(self, i: int):
        t = self.tok(i)
        if t is None:
            return None
        words: List[str] = []
        j = i
        if t.lower in self.g.weekdays and _is_capitalized(t):
            nxt = j + 1 + (1 if self.surface(j + 1) == "," else 0)
            nt = self.tok(nxt)
            if nt is None or nt.lower not in self.g.months or not _is_capitalized(nt):
                return None
            words.append(t.lower)
            j = nxt
        mt = self.tok(j)
        if mt is None or mt.lower not in self.g.months or not _is_capitalized(mt):
            return None
        words.append(mt.lower)
        year = self._int_token(j + 1, 1000, 2099)
        if year is not None:
            return j + 2, words + num.year_words(year)
        day = self._int_token(j + 1, 1, 31)
        if day is None:
            return None
        words += num.integer_words(day)
        k = j + 2 + (1 if self.surface(j + 2) == "," else 0)
        year = self._int_token(k, 1000, 2099)
        if year is not None:
            return k + 1, words + num.year_words(year)
        return j + 2, words

    def time(self, i: int):
        m = _TIME.match(self.surface(i) or "")
        if not m:
            return None
        mer_tok = self.tok(i + 1)
        meridiem = mer_tok.lower if mer_tok is not None and mer_tok.lower in MERIDIEM_WRITTEN else None
        words = _hour_minute_words(int(m.group(1)), int(m.group(2)), meridiem)
        if words is None:
            return None
        return i + (2 if meridiem else 1), words

    def phone(self, i: int):
        s = self.surface(i) or ""
        if not _PHONE.match(s):
            return None
        digits = s.replace("-", "")
        fmt = self.g.phone.get(len(digits))
        if fmt is None or fmt.layout.replace("X", "0") != re.sub(r"\d", "0", s) \
                or not digits.startswith(fmt.prefix):
            return None
        groups = s.split("-")
        area = 1 if fmt.prefix else 0
        words: List[str] = []
        for n, group in enumerate(groups):
            if n == area and re.fullmatch(r"[1-9]00", group):
                words += [num.UNITS[int(group[0])], "hundred"]
            else:
                words += num.digit_words(group)
        return i + 1, words

    def currency(self, i: int):
        m = _CURRENCY.match(self.surface(i) or "")
        if not m or m.group(2) not in self.g.currency_words:
            return None
        singular, plural = self.g.currency_words[m.group(2)]
        amount = m.group(3).replace(",", "")
        words = _amount_words(m.group(1) + amount)
        return i + 1, words + (singular if amount == "1" else plural).split()

    def percent(self, i: int):
        m = _PERCENT.match(self.surface(i) or "")
        sign_words = [" ".join(k) for k, v in self.g.percent.items() if v == "%"]
        if not m or not sign_words:
            return None
        return i + 1, _amount_words(m.group(1)) + sign_words[0].split()

    def measure(self, i: int):
        s = self.surface(i) or ""
        unit = self.surface(i + 1)
        if not (_INT.match(s) or _DECIMAL.match(s)) or unit not in self.g.unit_words:
            return None
        singular, plural = self.g.unit_words[unit]
        return i + 2, _amount_words(s) + (singular if s == "1" else plural).split()

    def fraction(self, i: int):
        m = _FRACTION.match(self.surface(i) or "")
        if not m:
            return None
        a, b = int(m.group(1)), int(m.group(2))
        try:
            return i + 1, num.verbalize_fraction(a, b)
        except num.StyleInapplicable:
            return i + 1, num.integer_words(a) + ["over"] + num.integer_words(b)

    def ordinal(self, i: int):
        m = _ORDINAL.match(self.surface(i) or "")
        if not m or int(m.group(1)) == 0:
            return None
        return i + 1, num.verbalize_ordinal(int(m.group(1)))

    def decimal(self, i: int):
        s = self.surface(i) or ""
        if _DECIMAL.match(s):
            return i + 1, num.verbalize_cardinal(Decimal(s), NumberStyle.DECIMAL)
        return None

    def cardinal(self, i: int):
        s = self.surface(i) or ""
        if _INT.match(s):
            if len(s.lstrip("-")) > 1 and s.lstrip("-").startswith("0"):
                return i + 1, (["minus"] if s.startswith("-") else []) + num.digit_words(s.lstrip("-"))
            return i + 1, (["minus"] if s.startswith("-") else []) + num.integer_words(abs(int(s)))
        if _GROUPED_INT.match(s):
            return i + 1, num.integer_words(int(s.replace(",", "")))
        return None

    RULES = (
        ("date", C.DATE), ("time", C.TIME), ("phone", C.PHONE), ("currency", C.CURRENCY),
        ("percent", C.PERCENT), ("measure", C.MEASURE), ("fraction", C.FRACTION),
        ("ordinal", C.ORDINAL), ("decimal", C.DECIMAL), ("cardinal", C.CARDINAL),
    )

    def entity(self, i: int):
        for name, cls in self.RULES:
            hit = getattr(self, name)(i)
            if hit is not None:
                return hit[0], hit[1], cls
        return None


def _fallback_words(token: Token) -> List[str]:
    """Lowercase a token the rules do not cover, spelling any digit runs."""
    out: List[str] = []
    text = _GROUP_SEP.sub("", token.lower)
    for piece in _DIGITS.split(text):
        if not piece:
            continue
        if piece.isdigit():
            if len(piece) > 15 or (piece.startswith("0") and len(piece) > 1):
                out += num.digit_words(piece)
            else:
                out += num.integer_words(int(piece))
        else:
            out += [w.strip(string.punctuation) for w in piece.split()
                    if w.strip(string.punctuation)]
    return out


def tn(g: Grammar, written: str | Sentence) -> TnResult:
    """Verbalize ``written``; punctuation is stripped and recorded."""
    s = written if isinstance(written, Sentence) else tokenize(written)
    tokens = s.tokens
    norm = _Normalizer(g, tokens)
    spoken: List[str] = []
    removed: List[Tuple[int, str]] = []
    expansions: List[Expansion] = []
    i = 0
    while i < len(tokens):
        t = tokens[i]
        key = t.lower + "."
        if t.kind is TokenKind.WORD and key in g.abbreviations and norm.surface(i + 1) == ".":
            left = tokens[i - 1] if i > 0 else None
            right = norm.tok(i + 2)
            expansion = expand_abbreviation(g, key, left, right)
            expansions.append(Expansion(i, i + 2, t.surface + ".", expansion, "abbreviation", len(spoken)))
            spoken += expansion.split()
            i += 2
            continue
        hit = norm.entity(i)
        if hit is not None:
            end, words, cls = hit
            expansions.append(Expansion(i, end, detokenize(tokens[i:end]), " ".join(words), cls.value,
                                        len(spoken)))
            spoken += words
            i = end
            continue
        if t.is_punct:
            removed.append((i, t.surface))
        elif t.kind is TokenKind.NUMBER:
            words = _fallback_words(t)
            expansions.append(Expansion(i, i + 1, t.surface, " ".join(words), "digits", len(spoken)))
            spoken += words
        else:
            spoken.append(t.lower)
        i += 1
    return TnResult(Sentence.from_surfaces(spoken), tuple(removed), tuple(expansions))
