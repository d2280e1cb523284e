"""Lexicon documents and their compiled, read-only :class:`Grammar`.

A lexicon file is YAML holding one or more documents::

    schema_version: 1
    lexicon: months
    locale: en-US
    entries:
      october: 10

Known lexicons: months, weekdays, currency, percent, units, time_words,
meridiem, time_zones, phone, abbreviations. A lexicon that never appears
compiles to an empty table, which disables whatever depends on it.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import yaml

SCHEMA_VERSION = 1

LEXICONS = (
    "months", "weekdays", "currency", "percent", "units", "time_words",
    "meridiem", "time_zones", "phone", "abbreviations",
)
CONDITIONS = frozenset(
    ["right_capitalized", "left_capitalized", "sentence_initial", "sentence_final", "always"]
)


class GrammarError(Exception):
    def __init__(self, message: str, source: str = "<string>", line: Optional[int] = None):
        self.source = source
        self.line = line
        where = f"{source}:{line}" if line is not None else source
        super().__init__(f"{where}: {message}")


class GrammarSyntaxError(GrammarError):
    pass


class DuplicateKey(GrammarError):
    pass


class _Loader(yaml.SafeLoader):
    """Safe loader that rejects duplicate keys and only reads true/false as bools."""


_Loader.yaml_implicit_resolvers = {
    ch: [(tag, rx) for tag, rx in resolvers if tag != "tag:yaml.org,2002:bool"]
    for ch, resolvers in yaml.SafeLoader.yaml_implicit_resolvers.items()
}


def _construct_mapping(loader: _Loader, node: yaml.MappingNode, deep: bool = False) -> Dict[Any, Any]:
    seen: Dict[Any, int] = {}
    for key_node, _ in node.value:
        key = loader.construct_object(key_node, deep=True)
        if key in seen:
            raise DuplicateKey(
                f"duplicate key {key!r} (first seen on line {seen[key]})",
                loader.name, key_node.start_mark.line + 1,
            )
        seen[key] = key_node.start_mark.line + 1
    mapping = loader.construct_mapping(node, deep=deep)
    # entries keep their line numbers for later diagnostics
    mapping["__lines__"] = {k: line for k, line in seen.items()}
    return mapping


_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_mapping)


@dataclass(frozen=True)
class AbbreviationRule:
    expansion: str
    when: str


@dataclass(frozen=True)
class PhoneFormat:
    layout: str
    prefix: str = ""


@dataclass(frozen=True)
class Grammar:
    """Compiled lexicons. Treat every table as read-only."""

    locale: str = "en-US"
    months: Mapping[str, int] = field(default_factory=dict)
    weekdays: Mapping[str, int] = field(default_factory=dict)
    currency: Mapping[Tuple[str, ...], str] = field(default_factory=dict)
    currency_words: Mapping[str, Tuple[str, str]] = field(default_factory=dict)
    percent: Mapping[Tuple[str, ...], str] = field(default_factory=dict)
    units: Mapping[Tuple[str, ...], str] = field(default_factory=dict)
    unit_words: Mapping[str, Tuple[str, str]] = field(default_factory=dict)
    time_words: Mapping[str, Tuple[int, int, Optional[str]]] = field(default_factory=dict)
    meridiem: Mapping[Tuple[str, ...], str] = field(default_factory=dict)
    time_zones: FrozenSet[str] = frozenset()
    phone: Mapping[int, PhoneFormat] = field(default_factory=dict)
    abbreviations: Mapping[str, Tuple[AbbreviationRule, ...]] = field(default_factory=dict)

    @property
    def month_names(self) -> Dict[int, str]:
        return {v: k for k, v in self.months.items()}

    @property
    def weekday_names(self) -> Dict[int, str]:
        return {v: k for k, v in self.weekdays.items()}

    @property
    def phone_enabled(self) -> bool:
        return bool(self.phone)


def _phrase(key: Any) -> Tuple[str, ...]:
    return tuple(str(key).lower().split())


def _load_documents(text: str, source: str) -> List[Dict[str, Any]]:
    loader = _Loader(text)
    loader.name = source
    docs = []
    try:
        while loader.check_data():
            doc = loader.get_data()
            if doc is not None:
                docs.append(doc)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        line = mark.line + 1 if mark is not None else None
        raise GrammarSyntaxError(exc.problem or str(exc), source, line) from None
    finally:
        loader.dispose()
    return docs


def _check_header(doc: Any, source: str) -> Tuple[str, str, Dict[Any, Any], Dict[Any, int]]:
    if not isinstance(doc, dict):
        raise GrammarSyntaxError("a lexicon document must be a mapping", source)
    lines = doc.get("__lines__", {})
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise GrammarSyntaxError(f"unsupported schema_version {version!r}", source,
                                 lines.get("schema_version"))
    name = doc.get("lexicon")
    if name not in LEXICONS:
        raise GrammarSyntaxError(f"unknown lexicon {name!r}", source, lines.get("lexicon"))
    entries = doc.get("entries") or {}
    if not isinstance(entries, dict):
        raise GrammarSyntaxError("entries must be a mapping", source, lines.get("entries"))
    entry_lines = entries.pop("__lines__", {})
    return name, str(doc.get("locale", "en-US")), entries, entry_lines


def _strip_lines(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _strip_lines(v) for k, v in value.items() if k != "__lines__"}
    if isinstance(value, list):
        return [_strip_lines(v) for v in value]
    return value


def compile_grammar(rule_files: Iterable[Union[str, Path, Tuple[str, str]]]) -> Grammar:
    """Compile lexicon documents into a :class:`Grammar`.

    Each item is a path, or a ``(source_name, yaml_text)`` pair for
    in-memory documents. Errors carry the source name and line.
    """
    tables: Dict[str, Dict[Any, Any]] = {name: {} for name in LEXICONS}
    origin: Dict[Tuple[str, Any], str] = {}
    locale = None
    for item in rule_files:
        if isinstance(item, tuple):
            source, text = item
        else:
            source, text = str(item), Path(item).read_text(encoding="utf-8")
        for doc in _load_documents(text, source):
            name, doc_locale, entries, entry_lines = _check_header(doc, source)
            locale = locale or doc_locale
            for key, value in entries.items():
                if key in tables[name]:
                    raise DuplicateKey(f"duplicate {name} entry {key!r} (also in {origin[(name, key)]})",
                                       source, entry_lines.get(key))
                tables[name][key] = _strip_lines(value)
                origin[(name, key)] = source
            for key in entries:
                _validate_entry(name, key, tables[name][key], source, entry_lines.get(key))
    return _build(tables, locale or "en-US")


def _validate_entry(name: str, key: Any, value: Any, source: str, line: Optional[int]) -> None:
    def bad(msg: str) -> GrammarSyntaxError:
        return GrammarSyntaxError(f"{name} entry {key!r}: {msg}", source, line)

    if name in ("months", "weekdays"):
        if not isinstance(value, int):
            raise bad("value must be an integer")
    elif name == "currency":
        if not (isinstance(value, str) or (isinstance(value, dict) and "symbol" in value)):
            raise bad("value must be a symbol or a mapping with 'symbol'")
    elif name == "units":
        if not (isinstance(value, dict) and {"singular", "plural"} <= set(value)):
            raise bad("value must map 'singular' and 'plural'")
    elif name == "time_words":
        if not (isinstance(value, dict) and {"hour", "minute"} <= set(value)):
            raise bad("value must map 'hour' and 'minute'")
    elif name == "phone":
        if not isinstance(key, int) or not (isinstance(value, dict) and "format" in value):
            raise bad("key must be a digit count and value must map 'format'")
        if str(value["format"]).count("X") != key:
            raise bad("format must contain one X per digit")
    elif name == "abbreviations":
        rules = value if isinstance(value, list) else [value]
        for rule in rules:
            if isinstance(rule, str):
                continue
            if not (isinstance(rule, dict) and "expand" in rule):
                raise bad("rules need an 'expand' field")
            if rule.get("when", "always") not in CONDITIONS:
                raise bad(f"unknown condition {rule.get('when')!r}")


def _build(tables: Mapping[str, Mapping[Any, Any]], locale: str) -> Grammar:
    currency: Dict[Tuple[str, ...], str] = {}
    currency_words: Dict[str, Tuple[str, str]] = {}
    for word, value in tables["currency"].items():
        if isinstance(value, str):
            symbol, singular = value, str(word)
        else:
            symbol, singular = value["symbol"], str(value.get("singular", word))
        currency[_phrase(word)] = symbol
        currency[_phrase(singular)] = symbol
        currency_words.setdefault(symbol, (singular, str(word)))

    units: Dict[Tuple[str, ...], str] = {}
    unit_words: Dict[str, Tuple[str, str]] = {}
    for abbr, forms in tables["units"].items():
        units[_phrase(forms["singular"])] = str(abbr)
        units[_phrase(forms["plural"])] = str(abbr)
        unit_words[str(abbr)] = (str(forms["singular"]), str(forms["plural"]))

    abbreviations: Dict[str, Tuple[AbbreviationRule, ...]] = {}
    for key, value in tables["abbreviations"].items():
        rules = value if isinstance(value, list) else [value]
        abbreviations[str(key).lower()] = tuple(
            AbbreviationRule(r, "always") if isinstance(r, str)
            else AbbreviationRule(str(r["expand"]), r.get("when", "always"))
            for r in rules
        )

    return Grammar(
        locale=locale,
        months={str(k).lower(): int(v) for k, v in tables["months"].items()},
        weekdays={str(k).lower(): int(v) for k, v in tables["weekdays"].items()},
        currency=currency,
        currency_words=currency_words,
        percent={_phrase(k): str(v) for k, v in tables["percent"].items()},
        units=units,
        unit_words=unit_words,
        time_words={
            str(k).lower(): (int(v["hour"]), int(v["minute"]), v.get("meridiem"))
            for k, v in tables["time_words"].items()
        },
        meridiem={_phrase(k): str(v) for k, v in tables["meridiem"].items()},
        time_zones=frozenset(str(k).lower() for k in tables["time_zones"]),
        phone={int(k): PhoneFormat(str(v["format"]), str(v.get("prefix", "")))
               for k, v in tables["phone"].items()},
        abbreviations=abbreviations,
    )


def bundled_grammar_files(locale: str = "en") -> List[Tuple[str, str]]:
    root = resources.files("itnforge") / "grammars" / locale
    return [(f"{locale}/{p.name}", p.read_text(encoding="utf-8"))
            for p in sorted(root.iterdir(), key=lambda p: p.name) if p.name.endswith(".yaml")]


@functools.lru_cache(maxsize=None)
def default_grammar() -> Grammar:
    """The bundled English grammar."""
    return compile_grammar(bundled_grammar_files("en"))


def load_grammar(path: Optional[Union[str, Path, Sequence[Union[str, Path]]]] = None) -> Grammar:
    """Compile a grammar from a directory, a file, or several files."""
    if path is None:
        return default_grammar()
    paths = [path] if isinstance(path, (str, Path)) else list(path)
    files: List[Path] = []
    for p in map(Path, paths):
        if p.is_dir():
            files.extend(sorted(p.glob("*.yaml")) + sorted(p.glob("*.yml")))
        else:
            files.append(p)
    return compile_grammar(files)
