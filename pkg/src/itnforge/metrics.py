"""Word error rate split into ITN and non-ITN parts.

Reference words come tagged ITN / N-ITN (see :func:`itnforge.align.tag_itn`).
The hypothesis is aligned to the reference and each edit is charged to a
tag: substitutions and deletions to the reference word involved, insertions
to the reference word just before them (or the first one, at the start).
Scoring is case-sensitive, since capitalization is part of the written form.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .align import Delete, Insert, Match, Substitute, Tag, TaggedReference, levenshtein_align
from .text import SemioticClass, Sentence

C = SemioticClass

# Row layout of the per-usecase breakdown.
USECASES: Dict[str, frozenset] = {
    "Numbers": frozenset([C.CARDINAL, C.ORDINAL, C.FRACTION, C.DECIMAL]),
    "Units": frozenset([C.CURRENCY, C.PERCENT, C.MEASURE]),
    "Date Time": frozenset([C.DATE, C.TIME, C.YEAR]),
    "Misc": frozenset([C.PHONE]),
}


class EmptyReference(ValueError):
    pass


class EmptyCorpus(ValueError):
    pass


def _ratio(num: int, den: int) -> Optional[float]:
    return num / den if den else None


@dataclass(frozen=True)
class EvalReport:
    ref_words: int
    ref_itn_words: int
    errors_total: int
    errors_itn: int
    errors_nitn: int
    wer: Optional[float] = field(init=False)
    i_wer: Optional[float] = field(init=False)
    ni_wer: Optional[float] = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "wer", _ratio(self.errors_total, self.ref_words))
        object.__setattr__(self, "i_wer", _ratio(self.errors_itn, self.ref_itn_words))
        object.__setattr__(self, "ni_wer", _ratio(self.errors_nitn, self.ref_words - self.ref_itn_words))

    def __add__(self, other: "EvalReport") -> "EvalReport":
        return EvalReport(
            self.ref_words + other.ref_words,
            self.ref_itn_words + other.ref_itn_words,
            self.errors_total + other.errors_total,
            self.errors_itn + other.errors_itn,
            self.errors_nitn + other.errors_nitn,
        )

    def as_dict(self) -> Dict[str, object]:
        return asdict(self)


def score_sentence(tagged_ref: TaggedReference, hyp: Sentence) -> EvalReport:
    """Score one hypothesis against a tagged reference.

    >>> from itnforge.align import tag_itn
    >>> from itnforge.text import words
    >>> ref = tag_itn(words("i have twenty dollars"), words("i have $20"))
    >>> r = score_sentence(ref, words("i have 20 dollars"))
    >>> r.errors_itn, r.i_wer, r.ni_wer
    (2, 2.0, 0.0)
    """
    n = len(tagged_ref.tokens)
    if n == 0:
        raise EmptyReference("reference has no tokens")
    path = levenshtein_align(tagged_ref.tokens, hyp.tokens, case_insensitive=False)
    itn = nitn = 0
    last = 0  # reference index that owns an insertion
    for op in path:
        if isinstance(op, Match):
            last = op.i
            continue
        if isinstance(op, (Substitute, Delete)):
            last = op.i
        owner = tagged_ref.tags[last]
        if owner is Tag.ITN:
            itn += 1
        else:
            nitn += 1
    return EvalReport(n, tagged_ref.itn_count, path.cost, itn, nitn)


def score_corpus(pairs: Iterable[Tuple[TaggedReference, Sentence]]) -> EvalReport:
    """Micro-averaged report: counts are summed before dividing."""
    total: Optional[EvalReport] = None
    for ref, hyp in pairs:
        r = score_sentence(ref, hyp)
        total = r if total is None else total + r
    if total is None:
        raise EmptyCorpus("no sentence pairs to score")
    return total


def usecases_of(classes: Iterable[SemioticClass]) -> Tuple[str, ...]:
    present = set(classes)
    return tuple(name for name, members in USECASES.items() if present & members)


def score_by_usecase(
    pairs: Sequence[Tuple[TaggedReference, Sentence]],
    classes: Sequence[Iterable[SemioticClass]],
) -> Mapping[str, EvalReport]:
    """Corpus reports restricted to sentences carrying each usecase's classes.

    A sentence counts toward every usecase whose classes it contains;
    usecases without sentences are left out.
    """
    rows: Dict[str, EvalReport] = {}
    for (ref, hyp), cls in zip(pairs, classes):
        report = score_sentence(ref, hyp)
        for name in usecases_of(cls):
            rows[name] = rows[name] + report if name in rows else report
    return {name: rows[name] for name in USECASES if name in rows}
