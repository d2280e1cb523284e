import json

import pytest
from hypothesis import given, settings, strategies as st

from itnforge import numbers as num
from itnforge.datagen import (CorpusFormatError, ParallelPair, Provenance, build_corpus, corpus_stats,
                              format_for_path, format_pair, gen_cardinal_variants, pairs_for_line, parse_pair,
                              template_sentences)
from itnforge.rules import itn
from itnforge.text import SemioticClass as C


def test_variants_of_2105():
    assert set(gen_cardinal_variants(2105)) >= {
        "two thousand one hundred five",
        "two thousand one hundred and five",
        "twenty one oh five",
        "two one zero five",
        "two one oh five",
    }


def test_variants_of_zero_and_1984():
    assert gen_cardinal_variants(0) == ["zero"]
    assert "nineteen eighty four" in gen_cardinal_variants(1984)


def test_variants_reject_out_of_range():
    with pytest.raises(ValueError):
        gen_cardinal_variants(10 ** 12)
    with pytest.raises(ValueError):
        gen_cardinal_variants(-1)


@settings(max_examples=200)
@given(st.integers(min_value=0, max_value=10 ** 12 - 1))
def test_variants_are_distinct_and_parse_back(n):
    variants = gen_cardinal_variants(n)
    assert len(variants) == len(set(variants)) >= 1
    for v in variants:
        ws = v.split()
        parsed = num.parse_number(ws, 0)
        assert parsed.value == n and parsed.consumed == len(ws)


def test_date_pair(g):
    pairs = list(build_corpus(["October 20, 2020"], g, seed=0, synthetic_ratio=0.0))
    assert pairs == [ParallelPair("october twenty twenty twenty", "October 20, 2020", Provenance.TN, (C.DATE,))]


def test_free_punctuation_is_restored_in_spoken(g):
    [pair] = build_corpus(['he said, "I paid $5."'], g, synthetic_ratio=0.0)
    assert pair.spoken == 'he said, "i paid five dollars."'


def test_ratio_zero_gives_only_tn_pairs(g):
    lines = [f"we saw {n} birds" for n in range(200)]
    assert {p.provenance for p in build_corpus(lines, g, seed=3, synthetic_ratio=0.0)} == {Provenance.TN}


def test_synthetic_subset_is_deterministic(g):
    lines = [f"we saw {n * 37 + 100} birds" for n in range(1000)]
    runs = [[p for p in build_corpus(lines, g, seed=5, synthetic_ratio=0.5) if p.provenance is Provenance.SYNTHETIC]
            for _ in range(2)]
    assert runs[0] == runs[1]
    assert 350 < len(runs[0]) < 650


def test_synthetic_pairs_read_back(g):
    lines = template_sentences(g, 300, seed=11)
    synthetic = [p for p in build_corpus(lines, g, seed=1, synthetic_ratio=1.0) if p.provenance is Provenance.SYNTHETIC]
    assert synthetic
    for p in synthetic:
        assert itn(g, p.spoken) == p.written


def test_line_result_depends_only_on_its_index(g):
    lines = template_sentences(g, 20, seed=2)
    whole = [pairs_for_line(g, line, k, 9, 0.5) for k, line in enumerate(lines)]
    assert whole[7] == pairs_for_line(g, lines[7], 7, 9, 0.5)


def test_failing_line_is_skipped(g, monkeypatch, caplog):
    import itnforge.datagen as dg

    real = dg.tn

    def flaky(grammar, text):
        if "boom" in getattr(text, "raw", text):
            raise RuntimeError("boom")
        return real(grammar, text)

    monkeypatch.setattr(dg, "tn", flaky)
    pairs = list(build_corpus(["one", "boom", "two"], g))
    assert [p.written for p in pairs] == ["one", "two"]
    assert "line 1" in caplog.text


def test_bad_ratio(g):
    with pytest.raises(ValueError):
        list(build_corpus(["x"], g, synthetic_ratio=1.5))


def test_blank_lines_produce_nothing(g):
    assert list(build_corpus(["", "   "], g)) == []


@pytest.mark.parametrize("fmt", ["tsv", "jsonl"])
def test_format_round_trip(fmt):
    pair = ParallelPair("five dollars", "$5", Provenance.SYNTHETIC, (C.CURRENCY,))
    back = parse_pair(format_pair(pair, fmt), fmt)
    assert back.spoken == pair.spoken and back.written == pair.written and back.provenance is pair.provenance
    if fmt == "jsonl":
        assert back.entity_classes == (C.CURRENCY,)
        assert json.loads(format_pair(pair, fmt))["classes"] == ["Currency"]


@pytest.mark.parametrize("line,fmt", [("only one column", "tsv"), ("a\tb\tNope", "tsv"), ("{not json", "jsonl"),
                                      ('{"spoken": "a"}', "jsonl")])
def test_malformed_records(line, fmt):
    with pytest.raises(CorpusFormatError):
        parse_pair(line, fmt)


def test_format_for_path():
    assert format_for_path("x.jsonl") == "jsonl"
    assert format_for_path("x.tsv") == "tsv"
    assert format_for_path("x.dat", default="jsonl") == "jsonl"


def test_stats_plain_corpus():
    stats = corpus_stats([ParallelPair("hello there", "hello there")])
    assert stats.density == 0.0 and stats.pairs == 1


def test_stats_date_pair():
    stats = corpus_stats([ParallelPair("october twenty twenty twenty", "October 20, 2020", Provenance.TN, (C.DATE,))])
    assert stats.itn_words == 2 and stats.written_words == 3
    assert stats.density == pytest.approx(2 / 3)
    assert stats.by_class == {"Date": 1}


def test_stats_recovers_classes_with_grammar(g):
    stats = corpus_stats([ParallelPair("i paid five dollars", "i paid $5")], g)
    assert stats.by_class == {"Currency": 1}


def test_stats_density_matches_direct_count(g):
    pairs = list(build_corpus(template_sentences(g, 1000, seed=4), g, seed=4))
    stats = corpus_stats(pairs)
    from itnforge.align import Tag, tag_itn
    from itnforge.text import words

    direct = sum(t is Tag.ITN for p in pairs for t in tag_itn(words(p.spoken), words(p.written)).tags)
    assert stats.itn_words == direct
    assert 0.1 < stats.density < 0.6
    assert stats.by_provenance["TnGenerated"] == 1000


def test_templates_are_deterministic(g):
    assert template_sentences(g, 50, seed=1) == template_sentences(g, 50, seed=1)
    assert template_sentences(g, 50, seed=1) != template_sentences(g, 50, seed=2)
