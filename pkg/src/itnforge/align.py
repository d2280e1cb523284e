"""Levenshtein alignment of token sequences, punctuation restoration and ITN tagging.

The DP itself lives in a small kernel: the compiled ``_calign`` extension
when it was built, otherwise the pure-Python ``_align_py``. Setting
``ITNFORGE_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import enum
import logging
import os
from dataclasses import dataclass
from typing import Dict, Hashable, List, Sequence, Tuple, Union

from .text import Sentence, Token

log = logging.getLogger(__name__)

if os.environ.get("ITNFORGE_PURE_PYTHON", "") not in ("", "0"):
    from . import _align_py as _kernel
else:
    try:
        from . import _calign as _kernel  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        from . import _align_py as _kernel

KERNEL = _kernel.__name__.rsplit(".", 1)[-1]


@dataclass(frozen=True)
class Match:
    i: int
    j: int


@dataclass(frozen=True)
class Substitute:
    i: int
    j: int


@dataclass(frozen=True)
class Delete:
    i: int


@dataclass(frozen=True)
class Insert:
    j: int


Op = Union[Match, Substitute, Delete, Insert]


@dataclass(frozen=True)
class AlignmentPath:
    ops: Tuple[Op, ...]
    cost: int

    def __iter__(self):
        return iter(self.ops)

    def __len__(self) -> int:
        return len(self.ops)

    @property
    def matches(self) -> int:
        return sum(isinstance(op, Match) for op in self.ops)


class Tag(enum.Enum):
    ITN = "ITN"
    NITN = "N-ITN"


@dataclass(frozen=True)
class TaggedReference:
    tokens: Tuple[Token, ...]
    tags: Tuple[Tag, ...]

    def __post_init__(self) -> None:
        if len(self.tokens) != len(self.tags):
            raise ValueError("tokens and tags differ in length")

    @property
    def itn_count(self) -> int:
        return sum(t is Tag.ITN for t in self.tags)


TokenLike = Union[Token, str]


def _key(tok: TokenLike, case_insensitive: bool) -> str:
    s = tok.surface if isinstance(tok, Token) else tok
    return s.lower() if case_insensitive else s


def _intern(a: Sequence[Hashable], b: Sequence[Hashable]) -> Tuple[List[int], List[int]]:
    ids: Dict[Hashable, int] = {}
    return ([ids.setdefault(x, len(ids)) for x in a], [ids.setdefault(x, len(ids)) for x in b])


def edit_distance(a: Sequence[TokenLike], b: Sequence[TokenLike], case_insensitive: bool = False) -> int:
    ia, ib = _intern([_key(t, case_insensitive) for t in a], [_key(t, case_insensitive) for t in b])
    return _kernel.edit_distance(ia, ib)


def levenshtein_align(a: Sequence[TokenLike], b: Sequence[TokenLike],
                      case_insensitive: bool = True) -> AlignmentPath:
    """Minimal unit-cost alignment of ``a`` onto ``b``.

    Among equally cheap paths the one preferring match/substitute, then
    delete, then insert at each step from the start is returned.

    >>> [type(op).__name__ for op in levenshtein_align(["i", "have", "twenty", "dollars"],
    ...                                                ["i", "have", "$20"])]
    ['Match', 'Match', 'Substitute', 'Delete']
    """
    ia, ib = _intern([_key(t, case_insensitive) for t in a], [_key(t, case_insensitive) for t in b])
    cost, codes = _kernel.edit_ops(ia, ib)
    ops: List[Op] = []
    i = j = 0
    for c in codes:
        if c == 77:
            ops.append(Match(i, j))
            i += 1
            j += 1
        elif c == 83:
            ops.append(Substitute(i, j))
            i += 1
            j += 1
        elif c == 68:
            ops.append(Delete(i))
            i += 1
        else:
            ops.append(Insert(j))
            j += 1
    return AlignmentPath(tuple(ops), cost)


def restore_punctuation(written: Sentence, spoken: Sentence) -> Sentence:
    """Put the punctuation of ``written`` back into the punctuation-free ``spoken``.

    Spoken tokens are grouped under the written word they align to; an
    inserted spoken token joins the group before it. Punctuation that sat
    between two written words goes after the first word's group.
    """
    positions = [k for k, t in enumerate(written.tokens) if not t.is_punct]
    if len(positions) == len(written.tokens):
        return spoken
    path = levenshtein_align([written.tokens[k] for k in positions], spoken.tokens)
    groups: List[List[Token]] = [[] for _ in range(len(positions) + 1)]  # last slot: before any word
    current = -1
    for op in path:
        if isinstance(op, (Match, Substitute)):
            current = op.i
            groups[current].append(spoken.tokens[op.j])
        elif isinstance(op, Delete):
            current = op.i
        else:
            groups[current].append(spoken.tokens[op.j])
    out: List[Token] = []
    pre_emitted = False
    word = 0
    for t in written.tokens:
        if t.is_punct:
            out.append(t)
            continue
        if not pre_emitted:
            out.extend(groups[-1])
            pre_emitted = True
        out.extend(groups[word])
        word += 1
    if not pre_emitted:
        out.extend(groups[-1])
    return Sentence(tuple(out), " ".join(t.surface for t in out))


def tag_itn(spoken: Sentence, written: Sentence) -> TaggedReference:
    """Tag each written token N-ITN if it aligns as a case-insensitive match, else ITN."""
    path = levenshtein_align(spoken.tokens, written.tokens, case_insensitive=True)
    tags = [Tag.ITN] * len(written.tokens)
    for op in path:
        if isinstance(op, Match):
            tags[op.j] = Tag.NITN
    return TaggedReference(tuple(written.tokens), tuple(tags))
