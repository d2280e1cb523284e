import pytest

from itnforge.grammar import (DuplicateKey, GrammarSyntaxError, bundled_grammar_files, compile_grammar,
                              load_grammar)

MONTHS = """\
schema_version: 1
lexicon: months
entries:
  january: 1
  february: 2
"""


def test_bundled_grammar_tables(g):
    assert g.months["october"] == 10
    assert g.currency[("dollars",)] == "$"
    assert g.currency_words["$"] == ("dollar", "dollars")
    assert g.units[("kilometers",)] == "km"
    assert g.phone[10].layout == "XXX-XXX-XXXX"
    assert g.abbreviations["dr."][0].expansion == "doctor"
    assert g.phone_enabled


def test_compile_in_memory_document():
    g = compile_grammar([("months.yaml", MONTHS)])
    assert g.months == {"january": 1, "february": 2}
    assert not g.phone_enabled
    assert g.currency == {}


def test_duplicate_key_inside_file_reports_line():
    text = MONTHS + "  january: 3\n"
    with pytest.raises(DuplicateKey) as info:
        compile_grammar([("dup.yaml", text)])
    assert info.value.line == 6
    assert str(info.value).startswith("dup.yaml:6:")


def test_duplicate_entry_across_files():
    with pytest.raises(DuplicateKey, match="also in a.yaml"):
        compile_grammar([("a.yaml", MONTHS), ("b.yaml", MONTHS)])


@pytest.mark.parametrize("text,message", [
    ("schema_version: 2\nlexicon: months\nentries: {}\n", "schema_version"),
    ("schema_version: 1\nlexicon: planets\nentries: {}\n", "unknown lexicon"),
    ("schema_version: 1\nlexicon: months\nentries:\n  may: fifth\n", "integer"),
    ("schema_version: 1\nlexicon: phone\nentries:\n  10: {format: XXX-XXX}\n", "one X per digit"),
    ("schema_version: 1\nlexicon: abbreviations\nentries:\n  dr.: [{expand: doctor, when: rainy}]\n",
     "unknown condition"),
    ("schema_version: 1\nlexicon: months\nentries: [\n", "line|flow|expected"),
])
def test_syntax_errors(text, message):
    with pytest.raises(GrammarSyntaxError, match=message):
        compile_grammar([("bad.yaml", text)])


def test_yes_no_are_plain_strings():
    text = "schema_version: 1\nlexicon: time_zones\nentries:\n  no: {}\n  yes: {}\n"
    g = compile_grammar([("tz.yaml", text)])
    assert g.time_zones == {"no", "yes"}


def test_load_grammar_from_directory(tmp_path):
    for name, text in bundled_grammar_files("en"):
        (tmp_path / name.split("/")[-1]).write_text(text, encoding="utf-8")
    g = load_grammar(tmp_path)
    assert g.months["may"] == 5
    assert load_grammar(tmp_path / "dates.yaml").months["june"] == 6


def test_grammar_pickles(g):
    import pickle

    assert pickle.loads(pickle.dumps(g)) == g
