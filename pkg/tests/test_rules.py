import pytest
from hypothesis import given, settings, strategies as st

from itnforge.datagen import FILLER_WORDS, template_sentences
from itnforge.rules import EntitySpan, apply_spans, itn, render, tag
from itnforge.text import SemioticClass as C, tokenize


@pytest.mark.parametrize("spoken,written", [
    ("two thousand one hundred five", "2105"),
    ("october twenty twenty twenty", "October 20, 2020"),
    ("four percent of five dollars is twenty cents", "4% of $5 is 20 cents"),
    ("call one eight hundred two five five seven eight two eight", "call 1-800-255-7828"),
    ("twelve p m or two or four", "12:00 pm or 2:00 or 4:00"),
    ("three thousand six hundred forty nine point eight four dollars", "$3649.84"),
    ("ten twenty nine gmt november twenty ninth twenty twelve", "10:29 gmt november 29 2012"),
    ("the twenty ninth", "the 29th"),
    ("three quarters of five kilometers", "3/4 of 5 km"),
    ("at four thirty", "at 4:30"),
    ("seven oh five a m", "7:05 am"),
    ("monday october twenty one twenty twenty", "Monday, October 21, 2020"),
    ("nineteen eighty four", "1984"),
    ("minus five", "-5"),
    ("twelve point five percent", "12.5%"),
    ("five dollars and twenty cents", "$5.20"),
    ("one million", "1000000"),
])
def test_itn_examples(g, spoken, written):
    assert itn(g, spoken) == written


@pytest.mark.parametrize("text", [
    "hello world",
    "the weather is nice",
    "",
    "we met on a trip",
])
def test_plain_text_is_copied(g, text):
    assert itn(g, text) == text


def test_tag_reports_spans_and_classes(g):
    s = tokenize("i paid five dollars on october twenty")
    spans = tag(g, s)
    assert [(sp.cls, sp.start, sp.end) for sp in spans] == [(C.CURRENCY, 2, 4), (C.DATE, 5, 7)]


def test_year_class_for_pair_read(g):
    spans = tag(g, tokenize("nineteen eighty four"))
    assert [sp.cls for sp in spans] == [C.YEAR]


def test_disabled_phone_lexicon(g):
    from dataclasses import replace

    no_phone = replace(g, phone={})
    assert itn(no_phone, "one eight hundred two five five seven eight two eight") != "1-800-255-7828"


def test_render_failure_keeps_spoken_tokens(g, caplog):
    s = tokenize("a b c")
    broken = EntitySpan(C.CARDINAL, 1, 2, {})
    assert apply_spans(g, s, [broken]) == ["a", "b", "c"]
    assert "render failed" in caplog.text


def test_render_phone(g):
    span = EntitySpan(C.PHONE, 0, 1, {"digits": "9414654321", "layout": "XXX-XXX-XXXX"})
    assert render(g, span) == "941-465-4321"


def test_written_text_is_left_alone(g):
    # already-written entities carry no spoken-form patterns
    for text in ["it was priced at $3649.84", "October 20, 2020", "call 1-800-255-7828 at 10:29 pm"]:
        assert itn(g, text) == text


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 6))
def test_itn_is_idempotent_on_its_output(g, seed):
    for w in template_sentences(g, 3, seed):
        once = itn(g, w)
        assert itn(g, once) == once


@given(st.lists(st.sampled_from(FILLER_WORDS), max_size=15))
def test_filler_words_never_change(g, ws):
    text = " ".join(ws)
    assert itn(g, text) == text
