"""Inverse text normalization for ASR output.

Rule-based spoken-to-written conversion, written-to-spoken normalization
for building parallel corpora, ITN-aware error rates, and a hybrid runner
that gates an external neural model on its confidence.
"""

from .align import levenshtein_align, restore_punctuation, tag_itn
from .grammar import Grammar, compile_grammar, default_grammar, load_grammar
from .metrics import EvalReport, score_corpus, score_sentence
from .rules import itn
from .text import SemioticClass, Sentence, Token, tokenize
from .tn import tn

__version__ = "0.1.0"

__all__ = [
    "EvalReport", "Grammar", "SemioticClass", "Sentence", "Token", "compile_grammar",
    "default_grammar", "itn", "levenshtein_align", "load_grammar", "restore_punctuation",
    "score_corpus", "score_sentence", "tag_itn", "tn", "tokenize",
]
