"""Parallel spoken/written corpus manufacturing.

Each written line goes through :func:`itnforge.tn.tn`, then gets its free
punctuation put back with :func:`itnforge.align.restore_punctuation`. TN
reads every number one way only, so lines carrying plain cardinals are
also resampled into synthetic pairs with other spoken readings.

Randomness: every line gets its own ``random.Random(seed * 1_000_003 + index)``
(Python's Mersenne Twister), so output depends only on seed, line index and
line text, and lines can be processed in any order.
"""

from __future__ import annotations

import collections
import enum
import json
import logging
import random
import re
from dataclasses import dataclass, field
from typing import Counter, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from . import numbers as num
from .align import restore_punctuation, tag_itn
from .grammar import Grammar
from .numbers import NumberStyle
from .rules import itn, tag
from .text import SemioticClass, Sentence, detokenize, tokenize, words
from .tn import TnResult, tn

log = logging.getLogger(__name__)

C = SemioticClass
MAX_VARIANT_VALUE = 10 ** 12
_PLAIN_INT = re.compile(r"^(0|[1-9]\d*)$")


class Provenance(enum.Enum):
    TN = "TnGenerated"
    SYNTHETIC = "Synthetic"


@dataclass(frozen=True)
class ParallelPair:
    spoken: str
    written: str
    provenance: Provenance = Provenance.TN
    entity_classes: Tuple[SemioticClass, ...] = ()

    def to_tsv(self) -> str:
        return f"{self.spoken}\t{self.written}\t{self.provenance.value}"

    def to_json(self) -> str:
        record = {
            "spoken": self.spoken,
            "written": self.written,
            "provenance": self.provenance.value,
            "classes": [c.value for c in self.entity_classes],
        }
        return json.dumps(record, ensure_ascii=False)


class CorpusFormatError(ValueError):
    pass


def format_pair(pair: ParallelPair, fmt: str = "tsv") -> str:
    if fmt == "tsv":
        return pair.to_tsv()
    if fmt == "jsonl":
        return pair.to_json()
    raise ValueError(f"unknown corpus format {fmt!r}")


def parse_pair(line: str, fmt: str = "tsv") -> ParallelPair:
    """Read one corpus record; raises :class:`CorpusFormatError`."""
    line = line.rstrip("\r\n")
    try:
        if fmt == "jsonl":
            rec = json.loads(line)
            return ParallelPair(rec["spoken"], rec["written"], Provenance(rec.get("provenance", "TnGenerated")),
                                tuple(C(c) for c in rec.get("classes", ())))
        cols = line.split("\t")
        if len(cols) not in (2, 3):
            raise CorpusFormatError(f"expected 2 or 3 tab-separated columns, got {len(cols)}")
        prov = Provenance(cols[2]) if len(cols) == 3 else Provenance.TN
        return ParallelPair(cols[0], cols[1], prov)
    except (KeyError, ValueError, TypeError) as exc:
        if isinstance(exc, CorpusFormatError):
            raise
        raise CorpusFormatError(str(exc)) from exc


def format_for_path(path: str, default: str = "tsv") -> str:
    """``jsonl`` for .jsonl/.json paths, ``tsv`` for .tsv/.txt, else ``default``."""
    lower = str(path).lower()
    if lower.endswith((".jsonl", ".json")):
        return "jsonl"
    if lower.endswith((".tsv", ".txt")):
        return "tsv"
    return default


# -- variants --------------------------------------------------------------------

def _parses_back(spoken: List[str], value: int) -> bool:
    return any(c.consumed == len(spoken) and c.value == value and c.leading_zeros == 0
               for c in num.number_candidates(spoken, 0))


def gen_cardinal_variants(value: int) -> List[str]:
    """Every distinct spoken reading of ``value`` that parses back to it.

    >>> gen_cardinal_variants(2105)  # doctest: +NORMALIZE_WHITESPACE
    ['two thousand one hundred five', 'two thousand one hundred and five',
     'twenty one oh five', 'two one zero five', 'two one oh five']
    """
    if not 0 <= value < MAX_VARIANT_VALUE:
        raise ValueError(f"value out of range: {value}")
    attempts = [
        (NumberStyle.COMPOSITIONAL, "zero"),
        (NumberStyle.COMPOSITIONAL_AND, "zero"),
        (NumberStyle.PAIR_READ, "oh"),
        (NumberStyle.DIGIT_READ, "zero"),
        (NumberStyle.DIGIT_READ, "oh"),
    ]
    out: List[str] = []
    for style, zero_word in attempts:
        try:
            ws = num.verbalize_cardinal(value, style, zero_word=zero_word)
        except num.StyleInapplicable:
            continue
        text = " ".join(ws)
        if text not in out and _parses_back(ws, value):
            out.append(text)
    return out


# -- corpus building -------------------------------------------------------------

def _skeleton(written: Sentence, result: TnResult) -> Sentence:
    """The written sentence with each TN expansion replaced by its spoken words.

    Free punctuation stays where it was; punctuation inside an expansion
    (the comma in "October 20, 2020") goes away with it. Aligning against
    this instead of the raw written words keeps punctuation next to the
    right spoken words when several written tokens in a row are unmatched.
    """
    starts = {e.start: e for e in result.expansions}
    out: List[str] = []
    k = 0
    while k < len(written.tokens):
        e = starts.get(k)
        if e is not None:
            out.extend(e.spoken.split())
            k = e.end
            continue
        out.append(written.tokens[k].lower)
        k += 1
    return Sentence.from_surfaces(out)


def _spoken_text(skeleton: Sentence, spoken: Sequence[str]) -> str:
    restored = restore_punctuation(skeleton, Sentence.from_surfaces(spoken))
    return detokenize(restored)


def line_rng(seed: int, index: int) -> random.Random:
    return random.Random(seed * 1_000_003 + index)


def pairs_for_line(g: Grammar, written: str, index: int, seed: int,
                   synthetic_ratio: float) -> List[ParallelPair]:
    """TN pair for one line, plus a synthetic pair when the line is sampled."""
    written = " ".join(written.split())
    if not written:
        return []
    sent = tokenize(written)
    result = tn(g, sent)
    skeleton = _skeleton(sent, result)
    classes = tuple(result.entity_classes)
    pairs = [ParallelPair(_spoken_text(skeleton, result.spoken.surfaces), written, Provenance.TN, classes)]

    cardinals = [e for e in result.expansions
                 if e.rule == C.CARDINAL.value and _PLAIN_INT.match(e.written)
                 and int(e.written) < MAX_VARIANT_VALUE]
    rng = line_rng(seed, index)
    if not cardinals or rng.random() >= synthetic_ratio:
        return pairs
    spoken = list(result.spoken.surfaces)
    for e in reversed(cardinals):
        spoken[e.spoken_start:e.spoken_end] = rng.choice(gen_cardinal_variants(int(e.written))).split()
    synthetic = _spoken_text(skeleton, spoken)
    if synthetic == pairs[0].spoken:
        return pairs
    check = itn(g, synthetic)
    if check != written:
        log.info("line %d: synthetic variant does not read back (%r != %r); skipped", index, check, written)
        return pairs
    pairs.append(ParallelPair(synthetic, written, Provenance.SYNTHETIC, classes))
    return pairs


def build_corpus(written_lines: Iterable[str], g: Grammar, seed: int = 0,
                 synthetic_ratio: float = 0.1) -> Iterator[ParallelPair]:
    """Stream parallel pairs for ``written_lines``; failing lines are logged and skipped."""
    if not 0.0 <= synthetic_ratio <= 1.0:
        raise ValueError(f"synthetic_ratio must be within [0, 1], got {synthetic_ratio}")
    for index, line in enumerate(written_lines):
        try:
            pairs = pairs_for_line(g, line, index, seed, synthetic_ratio)
        except Exception:
            log.warning("line %d: generation failed; skipped", index, exc_info=True)
            continue
        yield from pairs


# -- statistics ------------------------------------------------------------------

@dataclass
class CorpusStats:
    pairs: int = 0
    written_words: int = 0
    itn_words: int = 0
    by_provenance: Counter = field(default_factory=collections.Counter)
    by_class: Counter = field(default_factory=collections.Counter)

    @property
    def density(self) -> float:
        return self.itn_words / self.written_words if self.written_words else 0.0

    def as_dict(self) -> Dict[str, object]:
        return {
            "pairs": self.pairs,
            "written_words": self.written_words,
            "itn_words": self.itn_words,
            "itn_density": self.density,
            "by_provenance": dict(sorted(self.by_provenance.items())),
            "by_class": dict(sorted(self.by_class.items())),
        }


def corpus_stats(pairs: Iterable[ParallelPair], g: Optional[Grammar] = None) -> CorpusStats:
    """ITN-word density, entity counts per class and pair counts per provenance.

    Pairs read from TSV carry no classes; with ``g`` they are recovered by
    tagging the spoken side.
    """
    stats = CorpusStats()
    for pair in pairs:
        stats.pairs += 1
        stats.by_provenance[pair.provenance.value] += 1
        ref = tag_itn(words(pair.spoken), words(pair.written))
        stats.written_words += len(ref.tokens)
        stats.itn_words += ref.itn_count
        classes = pair.entity_classes
        if not classes and g is not None:
            classes = tuple(span.cls for span in tag(g, tokenize(pair.spoken)))
        stats.by_class.update(c.value for c in classes)
    return stats


# -- templates -------------------------------------------------------------------

# Plain filler words: lowercase, and none of them is a number, month, unit,
# currency, meridiem or connector word the rules react to.
FILLER_WORDS = (
    "we", "saw", "the", "blue", "house", "near", "river", "with", "some", "people",
    "about", "later", "they", "paid", "quite", "nearly", "report", "says", "during",
    "trip", "roughly", "only", "found", "weather", "train", "left", "after", "before",
    "morning", "meeting", "starts", "ends", "call", "office", "ticket", "costs",
    "price", "rose", "fell", "by", "on", "in", "this", "that", "team", "scored",
    "bought", "old", "new", "car", "weighs", "drove", "walked", "she", "he", "you",
)
TERMINALS = (".", ".", ".", "?", "!", "")


def _entity(rng: random.Random, g: Grammar) -> str:
    kind = rng.randrange(11)
    if kind == 0:
        return str(rng.choice([rng.randrange(100), rng.randrange(100, 10000), rng.randrange(10 ** 9)]))
    if kind == 1:
        n = rng.randrange(1, 1000)
        return f"{n}{num.ordinal_suffix(n)}"
    if kind == 2:
        return f"{rng.randrange(1, 10)}/{rng.randrange(2, 11)}"
    if kind == 3:
        return f"{rng.randrange(100)}.{rng.randrange(1, 100)}"
    if kind == 4:
        symbol = rng.choice(sorted(g.currency_words))
        amount = str(rng.randrange(1, 10000))
        if rng.random() < 0.4:
            amount += f".{rng.randrange(100):02d}"
        return f"{symbol}{amount}"
    if kind == 5:
        return f"{rng.randrange(1, 101)}%"
    if kind == 6:
        return f"{rng.randrange(1, 500)} {rng.choice(sorted(g.unit_words))}"
    if kind == 7:
        month = g.month_names[rng.randrange(1, 13)].capitalize()
        day, year = rng.randrange(1, 29), rng.randrange(1900, 2031)
        shape = rng.randrange(4)
        if shape == 0:
            return f"{month} {day}, {year}"
        if shape == 1:
            return f"{month} {year}"
        if shape == 2:
            return f"{month} {day}"
        weekday = g.weekday_names[rng.randrange(1, 8)].capitalize()
        return f"{weekday}, {month} {day}, {year}"
    if kind == 8:
        hour, minute = rng.randrange(1, 13), rng.choice([0, rng.randrange(60)])
        shape = rng.randrange(3)
        if shape == 0:
            return f"{hour}:{minute:02d} {rng.choice(['am', 'pm'])}"
        if shape == 1:
            return f"at {hour}:{minute:02d}"
        return f"{hour}:{minute:02d} {rng.choice(sorted(g.time_zones))}"
    if kind == 9:
        area = rng.randrange(2, 10) * 100 if rng.random() < 0.3 else rng.randrange(201, 1000)
        number = f"{area}-{rng.randrange(200, 1000)}-{rng.randrange(10000):04d}"
        return f"1-{number}" if rng.random() < 0.3 else number
    return str(rng.randrange(1000, 2100))


def _fillers(rng: random.Random, k: int) -> List[str]:
    out = [rng.choice(FILLER_WORDS) for _ in range(k)]
    if out and rng.random() < 0.15:
        out[-1] = f'"{out[-1]}"'
    elif out and rng.random() < 0.1:
        out[-1] = f"({out[-1]})"
    return out


def template_sentences(g: Grammar, n: int, seed: int = 0) -> List[str]:
    """``n`` written sentences built only from constructs the grammar covers.

    Entities are always separated by filler words, so spoken readings of
    neighbouring entities cannot run together.
    """
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        parts = _fillers(rng, rng.randrange(1, 4))
        for _ in range(rng.randrange(1, 4)):
            parts.append(_entity(rng, g) + ("," if rng.random() < 0.2 else ""))
            parts.extend(_fillers(rng, rng.randrange(1, 3)))
        parts[-1] += rng.choice(TERMINALS)
        out.append(" ".join(parts))
    return out
