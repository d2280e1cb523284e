"""Rule-cascade inverse text normalization.

``tag`` finds entity spans leftmost-longest over the spoken tokens, breaking
equal-length ties by class priority; ``render`` turns one span into written
form from its payload alone; ``itn`` glues the two together and copies every
other token through untouched.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from . import numbers as num
from .grammar import Grammar
from .numbers import NumberStyle, ParsedNumber
from .text import SemioticClass, Sentence, Token, detokenize, tokenize

log = logging.getLogger(__name__)

C = SemioticClass

PRIORITY = {
    cls: rank for rank, cls in enumerate([
        C.PHONE, C.DATE, C.TIME, C.CURRENCY, C.PERCENT, C.MEASURE,
        C.FRACTION, C.ORDINAL, C.DECIMAL, C.CARDINAL, C.YEAR,
    ])
}

COORDINATORS = frozenset(["or", "and", "to"])
TIME_TRIGGERS = frozenset(["at"])
OCLOCK = "o'clock"


@dataclass(frozen=True)
class EntitySpan:
    cls: SemioticClass
    start: int
    end: int
    payload: Mapping[str, Any] = field(default_factory=dict, compare=False)

    def __len__(self) -> int:
        return self.end - self.start


def _amount_text(n: ParsedNumber) -> str:
    return num.render_written(n)


class _Matcher:
    """Candidate generation over one sentence; number parses are memoized."""

    def __init__(self, g: Grammar, tokens: Sequence[Token]):
        self.g = g
        self.ws = [t.lower for t in tokens]
        self._nums: Dict[int, List[ParsedNumber]] = {}

    def at(self, i: int) -> Optional[str]:
        return self.ws[i] if 0 <= i < len(self.ws) else None

    def numbers(self, i: int) -> List[ParsedNumber]:
        if i not in self._nums:
            self._nums[i] = num.number_candidates(self.ws, i) if i < len(self.ws) else []
        return self._nums[i]

    def phrase(self, table: Mapping[Tuple[str, ...], str], i: int) -> Optional[Tuple[int, str]]:
        """Longest lexicon phrase starting at ``i`` as (end, value)."""
        best = None
        for words, value in table.items():
            n = len(words)
            if tuple(self.ws[i:i + n]) == words and (best is None or n > best[0] - i):
                best = (i + n, value)
        return best

    # -- per-class candidates; each yields (end, class, payload) --

    def phone(self, i: int):
        if not self.g.phone or self.at(i) == "oh":
            return
        digits = ""
        j = i
        while True:
            w = self.at(j)
            if w not in num.DIGIT_VALUES:
                break
            d = num.DIGIT_VALUES[w]
            if d > 0 and self.at(j + 1) == "hundred":
                digits += f"{d}00"
                j += 2
            else:
                digits += str(d)
                j += 1
            fmt = self.g.phone.get(len(digits))
            if fmt is not None and digits.startswith(fmt.prefix):
                yield j, C.PHONE, {"digits": digits, "layout": fmt.layout}

    def _day_candidates(self, i: int) -> List[Tuple[int, int]]:
        # "twenty" in "twenty ninth" is part of an ordinal, not a day
        ordinal = num.parse_ordinal(self.ws, i)
        shadow = ordinal.consumed if ordinal else 0
        out = []
        for c in self.numbers(i):
            if (c.style is NumberStyle.COMPOSITIONAL and c.consumed <= 2
                    and 1 <= c.value <= 31 and c.consumed >= shadow):
                out.append((i + c.consumed, int(c.value)))
        return out

    def _year_candidates(self, i: int) -> List[Tuple[int, int]]:
        out = []
        for c in self.numbers(i):
            if c.style in (NumberStyle.PAIR_READ, NumberStyle.COMPOSITIONAL, NumberStyle.COMPOSITIONAL_AND) \
                    and c.value == c.value.to_integral_value() and 1000 <= c.value <= 2099:
                out.append((i + c.consumed, int(c.value)))
        return out

    def date(self, i: int):
        months = self.g.months
        weekday = None
        j = i
        if self.at(i) in self.g.weekdays and self.at(i + 1) in months:
            weekday, j = self.at(i), i + 1
        if self.at(j) in months:
            month = months[self.at(j)]
            for d_end, day in self._day_candidates(j + 1):
                yield d_end, C.DATE, {"weekday": weekday, "month": month, "day": day, "year": None}
                for y_end, year in self._year_candidates(d_end):
                    yield y_end, C.DATE, {"weekday": weekday, "month": month, "day": day, "year": year}
            for y_end, year in self._year_candidates(j + 1):
                yield y_end, C.DATE, {"weekday": weekday, "month": month, "day": None, "year": year}
        if self.at(i - 1) in months:
            ordinal = num.parse_ordinal(self.ws, i)
            if ordinal is not None and 1 <= ordinal.value <= 31:
                end = i + ordinal.consumed
                payload = {"weekday": None, "month": None, "day": int(ordinal.value), "year": None}
                yield end, C.DATE, payload
                for y_end, year in self._year_candidates(end):
                    yield y_end, C.DATE, dict(payload, year=year)

    def hour_minutes(self, i: int) -> List[Tuple[int, int, int]]:
        """(end, hour, minute) for an hour word optionally followed by minutes."""
        w = self.at(i)
        if w not in num.UNIT_VALUES or not 1 <= num.UNIT_VALUES[w] <= 12:
            return []
        hour = num.UNIT_VALUES[w]
        out = [(i + 1, hour, 0)]
        nxt = self.at(i + 1)
        if nxt == OCLOCK:
            out.append((i + 2, hour, 0))
        elif nxt in ("oh", "zero"):
            d = self.at(i + 2)
            if d in num.DIGIT_VALUES and num.DIGIT_VALUES[d] > 0:
                out.append((i + 3, hour, num.DIGIT_VALUES[d]))
        else:
            for end, minute in num._below_hundred(self.ws, i + 1):
                if 10 <= minute <= 59:
                    out.append((end, hour, minute))
        return out

    def time(self, i: int):
        w = self.at(i)
        if w in self.g.time_words:
            hour, minute, meridiem = self.g.time_words[w]
            yield i + 1, C.TIME, {"hour": hour, "minute": minute, "meridiem": meridiem}
        for end, hour, minute in self.hour_minutes(i):
            has_minutes = end - i > 1
            mer = self.phrase(self.g.meridiem, end)
            if mer is not None:
                yield mer[0], C.TIME, {"hour": hour, "minute": minute, "meridiem": mer[1]}
            if not has_minutes:
                continue
            if (self.at(end - 1) == OCLOCK or self.at(end) in self.g.time_zones
                    or self.at(i - 1) in TIME_TRIGGERS):
                yield end, C.TIME, {"hour": hour, "minute": minute, "meridiem": None}

    def currency(self, i: int):
        for c in self.numbers(i):
            end = i + c.consumed
            hit = self.phrase(self.g.currency, end)
            if hit is None:
                continue
            cur_end, symbol = hit
            yield cur_end, C.CURRENCY, {"amount": _amount_text(c), "symbol": symbol}
            if c.style is NumberStyle.DECIMAL or c.value < 0:
                continue
            k = cur_end + (1 if self.at(cur_end) == "and" else 0)
            for cents in self.numbers(k):
                if (cents.style is NumberStyle.COMPOSITIONAL and 1 <= cents.value <= 99
                        and self.at(k + cents.consumed) in ("cents", "cent")):
                    amount = f"{_amount_text(c)}.{int(cents.value):02d}"
                    yield k + cents.consumed + 1, C.CURRENCY, {"amount": amount, "symbol": symbol}

    def _amount_with(self, i: int, table, cls, key):
        for c in self.numbers(i):
            hit = self.phrase(table, i + c.consumed)
            if hit is not None:
                yield hit[0], cls, {"amount": _amount_text(c), key: hit[1]}

    def percent(self, i: int):
        yield from self._amount_with(i, self.g.percent, C.PERCENT, "sign")

    def measure(self, i: int):
        yield from self._amount_with(i, self.g.units, C.MEASURE, "unit")

    def fraction(self, i: int):
        f = num.parse_fraction(self.ws, i)
        if f is not None:
            yield i + f.consumed, C.FRACTION, {"number": f}

    def ordinal(self, i: int):
        o = num.parse_ordinal(self.ws, i)
        if o is not None:
            yield i + o.consumed, C.ORDINAL, {"number": o}

    def number(self, i: int):
        best = num.best_candidate(self.numbers(i))
        if best is None:
            return
        if best.style is NumberStyle.DECIMAL:
            cls = C.DECIMAL
        elif best.style is NumberStyle.PAIR_READ and 1000 <= best.value <= 2099:
            cls = C.YEAR
        else:
            cls = C.CARDINAL
        yield i + best.consumed, cls, {"number": best}

    def candidates(self, i: int):
        for gen in (self.phone, self.date, self.time, self.currency, self.percent,
                    self.measure, self.fraction, self.ordinal, self.number):
            yield from gen(i)


def _as_time(m: _Matcher, span: EntitySpan) -> Optional[EntitySpan]:
    """Reinterpret a bare cardinal span as a clock time, if it reads as one."""
    if span.cls is not C.CARDINAL:
        return None
    for end, hour, minute in m.hour_minutes(span.start):
        if end == span.end:
            return EntitySpan(C.TIME, span.start, span.end,
                              {"hour": hour, "minute": minute, "meridiem": None})
    return None


def _upgrade_coordinated_times(m: _Matcher, spans: List[EntitySpan]) -> List[EntitySpan]:
    """"noon or two or four": cardinals coordinated with a time become times."""
    changed = True
    while changed:
        changed = False
        for k in range(len(spans) - 1):
            a, b = spans[k], spans[k + 1]
            if b.start != a.end + 1 or m.at(a.end) not in COORDINATORS:
                continue
            if a.cls is C.TIME and b.cls is C.CARDINAL:
                new = _as_time(m, b)
                if new is not None:
                    spans[k + 1] = new
                    changed = True
            elif a.cls is C.CARDINAL and b.cls is C.TIME:
                new = _as_time(m, a)
                if new is not None:
                    spans[k] = new
                    changed = True
    return spans


def tag(g: Grammar, s: Sentence) -> List[EntitySpan]:
    """Leftmost-longest, non-overlapping entity spans over ``s``."""
    m = _Matcher(g, s.tokens)
    spans: List[EntitySpan] = []
    i, n = 0, len(s.tokens)
    while i < n:
        best = None
        for end, cls, payload in m.candidates(i):
            key = (-(end - i), PRIORITY[cls])
            if best is None or key < best[0]:
                best = (key, EntitySpan(cls, i, end, payload))
        if best is None:
            i += 1
        else:
            spans.append(best[1])
            i = best[1].end
    return _upgrade_coordinated_times(m, spans)


def _render_date(g: Grammar, p: Mapping[str, Any]) -> str:
    month, day, year = p.get("month"), p.get("day"), p.get("year")
    if month is None:
        return f"{day} {year}" if year is not None else str(day)
    name = g.month_names[month].capitalize()
    if day is None:
        text = f"{name} {year}"
    elif year is None:
        text = f"{name} {day}"
    else:
        text = f"{name} {day}, {year}"
    if p.get("weekday"):
        text = f"{p['weekday'].capitalize()}, {text}"
    return text


def render(g: Grammar, span: EntitySpan) -> str:
    p = span.payload
    cls = span.cls
    if cls is C.DATE:
        return _render_date(g, p)
    if cls is C.TIME:
        text = f"{p['hour']}:{p['minute']:02d}"
        return f"{text} {p['meridiem']}" if p.get("meridiem") else text
    if cls is C.CURRENCY:
        amount = p["amount"]
        if amount.startswith("-"):
            return f"-{p['symbol']}{amount[1:]}"
        return f"{p['symbol']}{amount}"
    if cls is C.PERCENT:
        return f"{p['amount']}{p['sign']}"
    if cls is C.MEASURE:
        return f"{p['amount']} {p['unit']}"
    if cls is C.PHONE:
        digits = iter(p["digits"])
        return "".join(next(digits) if ch == "X" else ch for ch in p["layout"])
    if cls in (C.CARDINAL, C.ORDINAL, C.FRACTION, C.DECIMAL, C.YEAR):
        return num.render_written(p["number"])
    raise ValueError(f"no renderer for {cls}")


def apply_spans(g: Grammar, s: Sentence, spans: Sequence[EntitySpan]) -> List[str]:
    """Source order surfaces with every span replaced by its rendering."""
    out: List[str] = []
    i = 0
    for span in spans:
        out.extend(t.surface for t in s.tokens[i:span.start])
        try:
            rendered = render(g, span)
        except Exception:  # fail open: keep the spoken tokens
            log.warning("render failed for %s span %d:%d", span.cls.value, span.start, span.end,
                        exc_info=True)
            out.extend(t.surface for t in s.tokens[span.start:span.end])
        else:
            out.extend(tokenize(rendered).surfaces)
        i = span.end
    out.extend(t.surface for t in s.tokens[i:])
    return out


def itn(g: Grammar, spoken: str) -> str:
    """Spoken form to written form."""
    s = tokenize(spoken)
    return detokenize(apply_spans(g, s, tag(g, s)))
