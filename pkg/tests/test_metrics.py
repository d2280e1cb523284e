import pytest
from hypothesis import given, settings, strategies as st

from conftest import brute_edit_distance
from itnforge.align import Tag, TaggedReference, tag_itn
from itnforge.metrics import EmptyCorpus, EmptyReference, EvalReport, score_by_usecase, score_corpus, score_sentence
from itnforge.text import SemioticClass as C, Sentence, Token, words


def tagged(pairs):
    return TaggedReference(tuple(Token(w) for w, _ in pairs), tuple(t for _, t in pairs))


def test_perfect_hypothesis():
    ref = tag_itn(words("i have twenty dollars"), words("i have $20"))
    r = score_sentence(ref, words("i have $20"))
    assert (r.errors_total, r.wer, r.i_wer, r.ni_wer) == (0, 0.0, 0.0, 0.0)


def test_attribution_example():
    ref = tag_itn(words("i have twenty dollars"), words("i have $20"))
    r = score_sentence(ref, words("i have 20 dollars"))
    assert (r.errors_itn, r.errors_nitn, r.errors_total) == (2, 0, 2)
    assert r.i_wer == 2.0 and r.ni_wer == 0.0
    assert r.wer == pytest.approx(2 / 3)


def test_insert_at_start_goes_to_first_reference_word():
    ref = tagged([("$5", Tag.ITN), ("now", Tag.NITN)])
    r = score_sentence(ref, words("oh $5 now"))
    assert (r.errors_itn, r.errors_nitn) == (1, 0)


def test_zero_denominators_are_none():
    ref = tagged([("hello", Tag.NITN)])
    r = score_sentence(ref, words("hello"))
    assert r.i_wer is None and r.ni_wer == 0.0


def test_empty_reference():
    with pytest.raises(EmptyReference):
        score_sentence(tagged([]), words("x"))


def test_empty_corpus():
    with pytest.raises(EmptyCorpus):
        score_corpus([])


def test_corpus_is_micro_averaged():
    perfect = tagged([(w, Tag.NITN) for w in "a b c d".split()])
    r = score_corpus([(perfect, words("a b c d")), (perfect, words("a x c"))])
    assert r.errors_total == 2 and r.ref_words == 8
    assert r.wer == 0.25


def test_all_errors_on_itn_words():
    ref = tagged([("on", Tag.NITN), ("$5", Tag.ITN), ("today", Tag.NITN)])
    r = score_corpus([(ref, words("on five dollars today"))])
    assert r.ni_wer == 0.0 and r.errors_itn == 2


def test_case_matters_for_scoring():
    ref = tagged([("October", Tag.ITN)])
    assert score_sentence(ref, words("october")).errors_total == 1


def test_report_addition_and_dict():
    a = EvalReport(4, 1, 1, 1, 0)
    b = EvalReport(4, 2, 2, 0, 2)
    c = a + b
    assert c.as_dict() == {"ref_words": 8, "ref_itn_words": 3, "errors_total": 3, "errors_itn": 1,
                           "errors_nitn": 2, "wer": 3 / 8, "i_wer": 1 / 3, "ni_wer": 2 / 5}


def test_usecase_rows():
    ref = tag_itn(words("i have twenty dollars"), words("i have $20"))
    pairs = [(ref, words("i have 20 dollars")), (ref, words("i have $20"))]
    rows = score_by_usecase(pairs, [[C.CURRENCY], [C.CARDINAL, C.DATE]])
    assert list(rows) == ["Numbers", "Units", "Date Time"]
    assert rows["Units"].errors_itn == 2 and rows["Numbers"].errors_total == 0


refs = st.lists(st.tuples(st.sampled_from("abcd"), st.sampled_from([Tag.ITN, Tag.NITN])), min_size=1, max_size=8)
hyps = st.lists(st.sampled_from("abcde"), max_size=8)


@settings(max_examples=400)
@given(refs, hyps)
def test_wer_matches_oracle_and_decomposes(ref_pairs, hyp):
    ref = tagged(ref_pairs)
    r = score_sentence(ref, Sentence.from_surfaces(hyp))
    assert r.errors_total == brute_edit_distance([w for w, _ in ref_pairs], hyp)
    assert r.errors_itn + r.errors_nitn == r.errors_total
    assert r.wer == r.errors_total / len(ref_pairs)


@settings(max_examples=300)
@given(refs, hyps, st.sampled_from("abcd"), st.sampled_from([Tag.ITN, Tag.NITN]))
def test_appending_a_matched_word_never_adds_errors(ref_pairs, hyp, word, tag):
    before = score_sentence(tagged(ref_pairs), Sentence.from_surfaces(hyp))
    after = score_sentence(tagged(ref_pairs + [(word, tag)]), Sentence.from_surfaces(hyp + [word]))
    # Only the total is monotone: with the start-first tie-break an appended
    # match can move a deletion from one tag to the other (ref "a" vs "a a").
    assert after.errors_total <= before.errors_total
    assert after.errors_itn + after.errors_nitn == after.errors_total
