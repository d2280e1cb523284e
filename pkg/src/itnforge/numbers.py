"""English number-word grammar, in both directions.

Values are carried as :class:`decimal.Decimal` so that amounts such as
``3649.84`` survive parsing and rendering bit-exactly.

Parsing enumerates every analysis that starts at a position and keeps the
longest one; equal lengths are broken by style priority
(Decimal > Compositional > CompositionalAnd > PairRead > DigitRead).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from decimal import Decimal
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .text import Token


class NumberStyle(enum.Enum):
    COMPOSITIONAL = "Compositional"
    COMPOSITIONAL_AND = "CompositionalAnd"
    PAIR_READ = "PairRead"
    DIGIT_READ = "DigitRead"
    DECIMAL = "Decimal"
    ORDINAL = "Ordinal"
    FRACTION = "Fraction"


class StyleInapplicable(ValueError):
    """The requested spoken style cannot express the value."""


_PRIORITY = {
    NumberStyle.DECIMAL: 0,
    NumberStyle.COMPOSITIONAL: 1,
    NumberStyle.COMPOSITIONAL_AND: 2,
    NumberStyle.PAIR_READ: 3,
    NumberStyle.DIGIT_READ: 4,
}

UNITS = [
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
    "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen",
    "seventeen", "eighteen", "nineteen",
]
TENS = ["", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"]
SCALES = {"thousand": 3, "million": 6, "billion": 9, "trillion": 12}
_SCALE_BY_EXP = {exp: word for word, exp in SCALES.items()}

UNIT_VALUES: Dict[str, int] = {w: i for i, w in enumerate(UNITS)}
TENS_VALUES: Dict[str, int] = {w: i * 10 for i, w in enumerate(TENS) if w}
DIGIT_VALUES: Dict[str, int] = {w: i for i, w in enumerate(UNITS[:10])}
DIGIT_VALUES["oh"] = 0

ORDINAL_TO_CARDINAL = {
    "first": "one", "second": "two", "third": "three", "fourth": "four",
    "fifth": "five", "sixth": "six", "seventh": "seven", "eighth": "eight",
    "ninth": "nine", "tenth": "ten", "eleventh": "eleven", "twelfth": "twelve",
    "thirteenth": "thirteen", "fourteenth": "fourteen", "fifteenth": "fifteen",
    "sixteenth": "sixteen", "seventeenth": "seventeen", "eighteenth": "eighteen",
    "nineteenth": "nineteen", "twentieth": "twenty", "thirtieth": "thirty",
    "fortieth": "forty", "fiftieth": "fifty", "sixtieth": "sixty",
    "seventieth": "seventy", "eightieth": "eighty", "ninetieth": "ninety",
    "hundredth": "hundred", "thousandth": "thousand", "millionth": "million",
    "billionth": "billion", "trillionth": "trillion",
}
CARDINAL_TO_ORDINAL = {v: k for k, v in ORDINAL_TO_CARDINAL.items()}

# Fraction denominators: singular after "one", plural otherwise.
DENOMINATOR_SINGULAR = {
    "half": 2, "third": 3, "quarter": 4, "fourth": 4, "fifth": 5, "sixth": 6,
    "seventh": 7, "eighth": 8, "ninth": 9, "tenth": 10,
}
DENOMINATOR_PLURAL = {
    "halves": 2, "thirds": 3, "quarters": 4, "fourths": 4, "fifths": 5, "sixths": 6,
    "sevenths": 7, "eighths": 8, "ninths": 9, "tenths": 10,
}
_DENOMINATOR_WORDS = {2: ("half", "halves"), 3: ("third", "thirds"), 4: ("quarter", "quarters")}

NUMBER_WORDS = frozenset(
    list(UNIT_VALUES) + list(TENS_VALUES) + list(SCALES) + ["hundred", "oh", "point", "minus"]
    + list(ORDINAL_TO_CARDINAL) + list(DENOMINATOR_PLURAL)
)


@dataclass(frozen=True)
class ParsedNumber:
    value: Decimal
    style: NumberStyle
    consumed: int
    leading_zeros: int = 0
    denominator: Optional[int] = None

    def __post_init__(self) -> None:
        if self.consumed < 1:
            raise ValueError("consumed must be >= 1")


TokenLike = Union[Token, str]


def _lower(tokens: Sequence[TokenLike]) -> List[str]:
    return [t.lower if isinstance(t, Token) else t.lower() for t in tokens]


def _at(ws: Sequence[str], i: int) -> Optional[str]:
    return ws[i] if 0 <= i < len(ws) else None


# -- parsing -----------------------------------------------------------------

def _below_hundred(ws: Sequence[str], i: int) -> List[Tuple[int, int]]:
    """(end, value) for 1..99 spelled as units/teens or tens[+unit]."""
    w = _at(ws, i)
    out: List[Tuple[int, int]] = []
    if w in UNIT_VALUES and w != "zero":
        out.append((i + 1, UNIT_VALUES[w]))
    elif w in TENS_VALUES:
        out.append((i + 1, TENS_VALUES[w]))
        nxt = _at(ws, i + 1)
        if nxt in UNIT_VALUES and 1 <= UNIT_VALUES[nxt] <= 9:
            out.append((i + 2, TENS_VALUES[w] + UNIT_VALUES[nxt]))
    return out


def _below_thousand(ws: Sequence[str], i: int, wide_hundreds: bool) -> List[Tuple[int, int, bool]]:
    """(end, value, used_and). ``wide_hundreds`` admits "nineteen hundred"."""
    out: List[Tuple[int, int, bool]] = []
    for end, v in _below_hundred(ws, i):
        out.append((end, v, False))
        if _at(ws, end) != "hundred" or not (v <= 9 or wide_hundreds):
            continue
        base = v * 100
        out.append((end + 1, base, False))
        for e2, r in _below_hundred(ws, end + 1):
            out.append((e2, base + r, False))
        if _at(ws, end + 1) == "and":
            for e2, r in _below_hundred(ws, end + 2):
                out.append((e2, base + r, True))
    return out


def _digit_run(ws: Sequence[str], i: int) -> int:
    j = i
    while _at(ws, j) in DIGIT_VALUES:
        j += 1
    return j - i


def _compositional(ws: Sequence[str], i: int, digit_tail: bool = True) -> List[Tuple[int, int, bool]]:
    """All compositional analyses starting at ``i`` as (end, value, used_and).

    With ``digit_tail`` a head ending in "thousand" may be followed by exactly
    three digit words ("three thousand six four nine" -> 3649).
    """
    if _at(ws, i) == "zero":
        return [(i + 1, 0, False)]
    out: List[Tuple[int, int, bool]] = []

    def walk(pos: int, total: int, max_exp: int, used_and: bool) -> None:
        if pos > i:
            out.append((pos, total, used_and))
            if digit_tail and max_exp == 3 and _digit_run(ws, pos) >= 3:
                digits = "".join(str(DIGIT_VALUES[w]) for w in ws[pos:pos + 3])
                out.append((pos + 3, total + int(digits), used_and))
        for end, v, a in _below_thousand(ws, pos, wide_hundreds=(pos == i)):
            out.append((end, total + v, used_and or a))
            nxt = _at(ws, end)
            if v < 1000 and nxt in SCALES and SCALES[nxt] < max_exp:
                exp = SCALES[nxt]
                walk(end + 1, total + v * 10 ** exp, exp, used_and or a)

    walk(i, 0, 99, False)
    return out


def _pair_read(ws: Sequence[str], i: int) -> List[Tuple[int, int]]:
    out: List[Tuple[int, int]] = []
    for end, hi in _below_hundred(ws, i):
        w = _at(ws, end)
        if w == "hundred":
            out.append((end + 1, hi * 100))
        elif w in ("oh", "zero"):
            d = _at(ws, end + 1)
            if d in DIGIT_VALUES and DIGIT_VALUES[d] > 0:
                out.append((end + 2, hi * 100 + DIGIT_VALUES[d]))
        else:
            for e2, lo in _below_hundred(ws, end):
                if lo >= 10:
                    out.append((e2, hi * 100 + lo))
    return out


def _integer_candidates(ws: Sequence[str], i: int) -> List[ParsedNumber]:
    cands: List[ParsedNumber] = []
    for end, v, used_and in _compositional(ws, i):
        style = NumberStyle.COMPOSITIONAL_AND if used_and else NumberStyle.COMPOSITIONAL
        cands.append(ParsedNumber(Decimal(v), style, end - i))
    for end, v in _pair_read(ws, i):
        cands.append(ParsedNumber(Decimal(v), NumberStyle.PAIR_READ, end - i))
    run = _digit_run(ws, i)
    if run >= 2 and ws[i] != "oh":
        digits = "".join(str(DIGIT_VALUES[w]) for w in ws[i:i + run])
        stripped = digits.lstrip("0") or "0"
        cands.append(ParsedNumber(Decimal(int(digits)), NumberStyle.DIGIT_READ, run,
                                  leading_zeros=len(digits) - len(stripped)))
    return cands


def number_candidates(tokens: Sequence[TokenLike], start: int) -> List[ParsedNumber]:
    """Every integer or decimal analysis beginning at ``start``."""
    ws = _lower(tokens)
    sign = 1
    offset = 0
    if _at(ws, start) == "minus":
        sign, offset = -1, 1
    base = start + offset
    cands = _integer_candidates(ws, base)
    decimals: List[ParsedNumber] = []
    for c in cands:
        p = base + c.consumed
        if _at(ws, p) != "point":
            continue
        run = _digit_run(ws, p + 1)
        if run == 0:
            continue
        frac = "".join(str(DIGIT_VALUES[w]) for w in ws[p + 1:p + 1 + run])
        decimals.append(ParsedNumber(Decimal(f"{int(c.value)}.{frac}"), NumberStyle.DECIMAL,
                                     c.consumed + 1 + run, leading_zeros=c.leading_zeros))
    out = []
    for c in cands + decimals:
        value = -c.value if sign < 0 else c.value
        out.append(ParsedNumber(value, c.style, c.consumed + offset, c.leading_zeros))
    return out


def best_candidate(cands: Sequence[ParsedNumber]) -> Optional[ParsedNumber]:
    if not cands:
        return None
    return min(cands, key=lambda c: (-c.consumed, _PRIORITY.get(c.style, 9)))


def parse_number(tokens: Sequence[TokenLike], start: int) -> Optional[ParsedNumber]:
    """Longest cardinal/decimal reading at ``start``; ``None`` when none starts there."""
    return best_candidate(number_candidates(tokens, start))


def parse_ordinal(tokens: Sequence[TokenLike], start: int) -> Optional[ParsedNumber]:
    ws = _lower(tokens)
    for end in range(len(ws), start, -1):
        last = ws[end - 1]
        if last not in ORDINAL_TO_CARDINAL:
            continue
        base = ws[start:end - 1] + [ORDINAL_TO_CARDINAL[last]]
        if len(base) == 1 and (base[0] in SCALES or base[0] == "hundred"):
            base = ["one"] + base
        for e, v, _ in _compositional(base, 0, digit_tail=False):
            if e == len(base) and v > 0:
                return ParsedNumber(Decimal(v), NumberStyle.ORDINAL, end - start)
    return None


def parse_fraction(tokens: Sequence[TokenLike], start: int) -> Optional[ParsedNumber]:
    ws = _lower(tokens)
    best: Optional[ParsedNumber] = None
    for end, v, _ in _compositional(ws, start, digit_tail=False):
        w = _at(ws, end)
        den = None
        if v == 1 and w in DENOMINATOR_SINGULAR:
            den = DENOMINATOR_SINGULAR[w]
        elif v > 1 and w in DENOMINATOR_PLURAL:
            den = DENOMINATOR_PLURAL[w]
        if den is None:
            continue
        cand = ParsedNumber(Decimal(v), NumberStyle.FRACTION, end + 1 - start, denominator=den)
        if best is None or cand.consumed > best.consumed:
            best = cand
    return best


# -- verbalization -------------------------------------------------------------

def _below_hundred_words(n: int) -> List[str]:
    if n < 20:
        return [UNITS[n]]
    tens, unit = divmod(n, 10)
    return [TENS[tens]] + ([UNITS[unit]] if unit else [])


def _below_thousand_words(n: int, with_and: bool) -> List[str]:
    hundreds, rest = divmod(n, 100)
    out: List[str] = []
    if hundreds:
        out += [UNITS[hundreds], "hundred"]
        if rest and with_and:
            out.append("and")
    if rest:
        out += _below_hundred_words(rest)
    return out


def integer_words(n: int, with_and: bool = False) -> List[str]:
    if n < 0:
        return ["minus"] + integer_words(-n, with_and)
    if n == 0:
        return ["zero"]
    if n >= 10 ** 15:
        raise StyleInapplicable(f"{n} exceeds the trillion scale")
    out: List[str] = []
    for exp in (12, 9, 6, 3, 0):
        group = (n // 10 ** exp) % 1000
        if group:
            out += _below_thousand_words(group, with_and)
            if exp:
                out.append(_SCALE_BY_EXP[exp])
    return out


def digit_words(digits: str, zero_word: str = "zero") -> List[str]:
    return [zero_word if ch == "0" else UNITS[int(ch)] for ch in digits]


def _split_decimal(value: Decimal) -> Tuple[bool, str, str]:
    text = format(value, "f")
    negative = text.startswith("-")
    text = text.lstrip("-")
    intpart, _, frac = text.partition(".")
    return negative, intpart, frac


def verbalize_cardinal(value: Union[Decimal, int, str], style: NumberStyle = NumberStyle.COMPOSITIONAL,
                       zero_word: str = "zero") -> List[str]:
    """Spell ``value`` in ``style``; raises :class:`StyleInapplicable`."""
    value = Decimal(value)
    negative, intpart, frac = _split_decimal(value)
    n = int(intpart)
    if style is NumberStyle.DECIMAL:
        if not frac:
            raise StyleInapplicable("decimal style needs fraction digits")
        words = integer_words(n) + ["point"] + digit_words(frac)
        return (["minus"] if negative else []) + words
    if frac:
        raise StyleInapplicable(f"{style.value} cannot express fraction digits")
    if style is NumberStyle.COMPOSITIONAL:
        return (["minus"] if negative else []) + integer_words(n)
    if style is NumberStyle.COMPOSITIONAL_AND:
        words = integer_words(n, with_and=True)
        if "and" not in words:
            raise StyleInapplicable(f"{n} has no hundreds remainder to join with 'and'")
        return (["minus"] if negative else []) + words
    if negative:
        raise StyleInapplicable(f"{style.value} needs a non-negative value")
    if style is NumberStyle.PAIR_READ:
        if not 100 <= n <= 9999:
            raise StyleInapplicable("pair reading covers 3-4 digit integers")
        hi, lo = divmod(n, 100)
        if lo == 0:
            tail = ["hundred"]
        elif lo < 10:
            tail = ["oh", UNITS[lo]]
        else:
            tail = _below_hundred_words(lo)
        return _below_hundred_words(hi) + tail
    if style is NumberStyle.DIGIT_READ:
        if n == 0:
            return ["zero"]
        return digit_words(str(n), zero_word)
    raise StyleInapplicable(f"use verbalize_ordinal/verbalize_fraction for {style.value}")


def verbalize_ordinal(n: int) -> List[str]:
    if n <= 0:
        raise StyleInapplicable("ordinals start at 1")
    words = integer_words(n)
    words[-1] = CARDINAL_TO_ORDINAL[words[-1]]
    return words


def verbalize_fraction(numerator: int, denominator: int) -> List[str]:
    if numerator < 1 or not 2 <= denominator <= 10:
        raise StyleInapplicable("fractions cover positive numerators over 2..10")
    if denominator in _DENOMINATOR_WORDS:
        singular, plural = _DENOMINATOR_WORDS[denominator]
    else:
        singular = CARDINAL_TO_ORDINAL[UNITS[denominator]]
        plural = singular + "s"
    return integer_words(numerator) + [singular if numerator == 1 else plural]


def year_words(year: int) -> List[str]:
    """Conventional spoken year: pairs, except 2000-2009 and round thousands."""
    if 2000 <= year <= 2009 or year % 1000 == 0 or not 1000 <= year <= 9999:
        return integer_words(year)
    return verbalize_cardinal(year, NumberStyle.PAIR_READ, zero_word="oh")


# -- rendering -----------------------------------------------------------------

def ordinal_suffix(n: int) -> str:
    if 10 <= n % 100 <= 20:
        return "th"
    return {1: "st", 2: "nd", 3: "rd"}.get(n % 10, "th")


def render_written(n: ParsedNumber) -> str:
    if n.style is NumberStyle.FRACTION:
        return f"{int(n.value)}/{n.denominator}"
    if n.style is NumberStyle.ORDINAL:
        return f"{int(n.value)}{ordinal_suffix(int(n.value))}"
    negative, intpart, frac = _split_decimal(n.value)
    intpart = "0" * n.leading_zeros + intpart
    text = intpart + (f".{frac}" if frac else "")
    return ("-" if negative else "") + text
