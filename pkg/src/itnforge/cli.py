"""Command line interface.

    itnforge normalize    spoken lines  -> written lines (rule engine)
    itnforge denormalize  written lines -> spoken lines
    itnforge gen-data     written lines -> parallel corpus (TSV or JSONL)
    itnforge evaluate     corpus + hypotheses -> WER / I-WER / NI-WER report
    itnforge hybrid-run   spoken lines  -> written lines via backend + rules
    itnforge stats        corpus -> ITN density and class counts

Input defaults to stdin and output to stdout; diagnostics go to stderr.
Every option can also come from an ``ITNFORGE_<OPTION>`` environment
variable (``ITNFORGE_SEED=7``, ``ITNFORGE_GRAMMAR=...``); flags win.

Exit codes: 0 success, 1 more per-record failures than ``--max-errors``,
2 configuration error.
"""

from __future__ import annotations

import argparse
import contextlib
import itertools
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, IO, Iterable, Iterator, List, Optional, Sequence, Tuple

from . import datagen
from .align import tag_itn
from .grammar import Grammar, GrammarError, load_grammar
from .hybrid import BackendClient, HybridConfig, hybrid_batch, load_correction_rules
from .metrics import USECASES, EvalReport, score_sentence, usecases_of
from .rules import itn, tag
from .text import tokenize, words
from .tn import tn

log = logging.getLogger("itnforge")

ENV_PREFIX = "ITNFORGE_"
EXIT_OK, EXIT_RECORD_ERRORS, EXIT_CONFIG = 0, 1, 2
BLOCK_LINES = 512  # lines handed to the worker pool at a time


class ConfigError(Exception):
    pass


# -- worker-side helpers (module level so they pickle) -----------------------------

_GRAMMAR: Optional[Grammar] = None


def _init_worker(g: Grammar) -> None:
    global _GRAMMAR
    _GRAMMAR = g


def _normalize_one(line: str) -> Tuple[str, Optional[str]]:
    try:
        return itn(_GRAMMAR, line), None
    except Exception as exc:  # keep the line, report the failure
        return line, f"{type(exc).__name__}: {exc}"


def _denormalize_one(line: str) -> Tuple[str, Optional[str]]:
    try:
        return tn(_GRAMMAR, line).text, None
    except Exception as exc:
        return line.lower(), f"{type(exc).__name__}: {exc}"


def _gendata_one(job: Tuple[int, str, int, float]) -> Tuple[List[datagen.ParallelPair], Optional[str]]:
    index, line, seed, ratio = job
    try:
        return datagen.pairs_for_line(_GRAMMAR, line, index, seed, ratio), None
    except Exception as exc:
        return [], f"{type(exc).__name__}: {exc}"


def _score_one(job: Tuple[str, str, str]) -> Tuple[Optional[Tuple[EvalReport, Tuple[str, ...]]], Optional[str]]:
    spoken, written, hyp = job
    try:
        ref = tag_itn(words(spoken), words(written))
        report = score_sentence(ref, words(hyp))
        usecases = usecases_of(span.cls for span in tag(_GRAMMAR, tokenize(spoken)))
        return (report, usecases), None
    except Exception as exc:
        return None, f"{type(exc).__name__}: {exc}"


def _ordered_map(fn: Callable, items: Iterable, g: Grammar, jobs: int) -> Iterator:
    """``map(fn, items)`` in input order, on ``jobs`` processes when jobs > 1.

    Items are consumed a block at a time so memory stays bounded on long
    inputs.
    """
    if jobs <= 1:
        _init_worker(g)
        yield from map(fn, items)
        return
    it = iter(items)
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(g,)) as pool:
        while True:
            block = list(itertools.islice(it, BLOCK_LINES * jobs))
            if not block:
                return
            yield from pool.map(fn, block, chunksize=max(1, len(block) // (jobs * 4)))


# -- configuration ---------------------------------------------------------------------

class _ErrorBudget:
    def __init__(self, cap: int):
        self.cap = cap
        self.count = 0

    def record(self, where: str, message: str) -> None:
        self.count += 1
        log.error("%s: %s", where, message)

    @property
    def exceeded(self) -> bool:
        return self.count > self.cap


def _env_defaults(parser: argparse.ArgumentParser) -> Dict[str, object]:
    """Defaults taken from ITNFORGE_* variables, converted by each option's type."""
    out: Dict[str, object] = {}
    for action in parser._actions:
        if not action.option_strings or action.dest in ("help", "input", "output"):
            continue
        raw = os.environ.get(ENV_PREFIX + action.dest.upper())
        if raw is None:
            continue
        try:
            value = action.type(raw) if action.type else raw
        except (TypeError, ValueError):
            raise ConfigError(f"{ENV_PREFIX}{action.dest.upper()}={raw!r} is not a valid value") from None
        if action.choices is not None and value not in action.choices:
            raise ConfigError(f"{ENV_PREFIX}{action.dest.upper()} must be one of {sorted(action.choices)}")
        out[action.dest] = value
    return out


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("-i", "--input", help="input file (default: stdin)")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.add_argument("--grammar", help="lexicon directory or YAML file (default: bundled English)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes; output order is preserved")
    p.add_argument("--max-errors", type=int, default=0,
                   help="per-record failures tolerated before exiting with status 1")
    p.add_argument("--format", choices=["tsv", "jsonl"],
                   help="corpus/report format (default: from the file extension, else tsv)")
    p.add_argument("-v", "--verbose", action="count", default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="itnforge", description="Inverse text normalization toolkit.",
                                     formatter_class=argparse.RawDescriptionHelpFormatter,
                                     epilog="Options can also be set with ITNFORGE_<OPTION> variables.")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("normalize", help="spoken form to written form")
    _add_common(p)

    p = sub.add_parser("denormalize", help="written form to spoken form")
    _add_common(p)

    p = sub.add_parser("gen-data", help="build a parallel corpus from written lines")
    _add_common(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--synthetic-ratio", type=float, default=0.1,
                   help="share of number-bearing lines that also get a synthetic variant pair")
    p.add_argument("--templates", type=int, metavar="N",
                   help="generate N grammar-covered template sentences instead of reading input")

    p = sub.add_parser("evaluate", help="score hypotheses against a corpus")
    _add_common(p)
    p.add_argument("--hyp", required=True, help="hypothesis file, one line per corpus record")

    p = sub.add_parser("hybrid-run", help="neural backend with confidence switch, then rules")
    _add_common(p)
    p.add_argument("--backend", help="backend command line, tcp://host:port or unix://path")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--timeout", type=float, default=5.0, help="seconds to wait for backend replies")
    p.add_argument("--corrections", help="TSV of regex/replacement rules applied to neural output")
    p.add_argument("--trace", help="write one JSON decision record per line to this file")
    p.add_argument("--batch-size", type=int, default=64)

    p = sub.add_parser("stats", help="corpus statistics")
    _add_common(p)
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    sub = parser._subparsers._group_actions[0].choices[args.command]
    env = _env_defaults(sub)
    if env:
        sub.set_defaults(**env)
        args = parser.parse_args(argv)
    return args


def _validate(args: argparse.Namespace) -> None:
    if args.jobs < 1:
        raise ConfigError("--jobs must be at least 1")
    if args.max_errors < 0:
        raise ConfigError("--max-errors must not be negative")
    for name in ("input", "grammar", "hyp", "corrections"):
        path = getattr(args, name, None)
        if path and path != "-" and not os.path.exists(path):
            raise ConfigError(f"--{name}: no such file or directory: {path}")
    ratio = getattr(args, "synthetic_ratio", None)
    if ratio is not None and not 0.0 <= ratio <= 1.0:
        raise ConfigError("--synthetic-ratio must be within [0, 1]")
    threshold = getattr(args, "threshold", None)
    if threshold is not None and not 0.0 <= threshold <= 1.0:
        raise ConfigError("--threshold must be within [0, 1]")
    if getattr(args, "timeout", 1.0) <= 0:
        raise ConfigError("--timeout must be positive")
    if getattr(args, "templates", None) is not None and args.templates < 0:
        raise ConfigError("--templates must not be negative")


@contextlib.contextmanager
def _open_in(path: Optional[str]):
    if not path or path == "-":
        yield sys.stdin
    else:
        with open(path, encoding="utf-8") as fh:
            yield fh


@contextlib.contextmanager
def _open_out(path: Optional[str]):
    if not path or path == "-":
        yield sys.stdout
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _lines(fh: IO[str]) -> Iterator[str]:
    for line in fh:
        yield line.rstrip("\r\n")


def _corpus_format(args: argparse.Namespace, path: Optional[str]) -> str:
    """Output format: --format, else the file extension, else tsv."""
    return args.format or (datagen.format_for_path(path) if path else "tsv")


def _input_format(args: argparse.Namespace, path: Optional[str]) -> str:
    """Input corpus format: a known file extension, else --format, else tsv."""
    fallback = args.format or "tsv"
    return datagen.format_for_path(path, default=fallback) if path and path != "-" else fallback


def _pct(value: Optional[float]) -> str:
    return "-" if value is None else f"{100 * value:.1f}"


# -- commands ----------------------------------------------------------------------------

def cmd_normalize(args, g: Grammar, budget: _ErrorBudget, fn=_normalize_one) -> None:
    with _open_in(args.input) as fin, _open_out(args.output) as fout:
        for n, (text, err) in enumerate(_ordered_map(fn, _lines(fin), g, args.jobs), 1):
            if err:
                budget.record(f"line {n}", err)
            fout.write(text + "\n")


def cmd_denormalize(args, g: Grammar, budget: _ErrorBudget) -> None:
    cmd_normalize(args, g, budget, fn=_denormalize_one)


def cmd_gen_data(args, g: Grammar, budget: _ErrorBudget) -> None:
    fmt = _corpus_format(args, args.output)
    with contextlib.ExitStack() as stack:
        if args.templates is not None:
            source: Iterable[str] = datagen.template_sentences(g, args.templates, args.seed)
        else:
            source = _lines(stack.enter_context(_open_in(args.input)))
        fout = stack.enter_context(_open_out(args.output))
        jobs = ((k, line, args.seed, args.synthetic_ratio) for k, line in enumerate(source))
        for k, (pairs, err) in enumerate(_ordered_map(_gendata_one, jobs, g, args.jobs)):
            if err:
                budget.record(f"line {k + 1}", err)
            for pair in pairs:
                fout.write(datagen.format_pair(pair, fmt) + "\n")


def _read_corpus(path: Optional[str], fmt: str, budget: _ErrorBudget) -> Iterator[Optional[datagen.ParallelPair]]:
    with _open_in(path) as fh:
        for n, line in enumerate(_lines(fh), 1):
            if not line.strip():
                continue
            try:
                yield datagen.parse_pair(line, fmt)
            except datagen.CorpusFormatError as exc:
                budget.record(f"corpus line {n}", str(exc))
                yield None


def _report_rows(overall: Optional[EvalReport], rows: Dict[str, EvalReport]) -> List[Tuple[str, EvalReport]]:
    out = [("Overall", overall)] if overall is not None else []
    return out + [(name, rows[name]) for name in USECASES if name in rows]


def cmd_evaluate(args, g: Grammar, budget: _ErrorBudget) -> None:
    fmt = _input_format(args, args.input)
    overall: Optional[EvalReport] = None
    rows: Dict[str, EvalReport] = {}
    with _open_in(args.hyp) as fhyp:
        hyps = _lines(fhyp)
        jobs = []
        for pair in _read_corpus(args.input, fmt, budget):
            hyp = next(hyps, None)
            if hyp is None:
                raise ConfigError("hypothesis file has fewer lines than the corpus")
            if pair is not None:
                jobs.append((pair.spoken, pair.written, hyp))
        if next(hyps, None) is not None:
            raise ConfigError("hypothesis file has more lines than the corpus")
    for n, (result, err) in enumerate(_ordered_map(_score_one, jobs, g, args.jobs), 1):
        if err:
            budget.record(f"record {n}", err)
            continue
        report, usecases = result
        overall = report if overall is None else overall + report
        for name in usecases:
            rows[name] = rows[name] + report if name in rows else report
    if overall is None:
        raise ConfigError("nothing to score: the corpus is empty")
    with _open_out(args.output) as fout:
        for name, r in _report_rows(overall, rows):
            if (args.format or "tsv") == "jsonl":
                fout.write(json.dumps({"usecase": name, **r.as_dict()}) + "\n")
                continue
            if name == "Overall":
                fout.write("usecase\tref_words\tref_itn_words\terrors\tWER\tI-WER\tNI-WER\n")
            fout.write(f"{name}\t{r.ref_words}\t{r.ref_itn_words}\t{r.errors_total}\t"
                       f"{_pct(r.wer)}\t{_pct(r.i_wer)}\t{_pct(r.ni_wer)}\n")


def cmd_hybrid_run(args, g: Grammar, budget: _ErrorBudget) -> None:
    rules = load_correction_rules(args.corrections) if args.corrections else ()
    cfg = HybridConfig(threshold=args.threshold, backend=args.backend, timeout=args.timeout,
                       correction_rules=rules)
    with contextlib.ExitStack() as stack:
        fin = stack.enter_context(_open_in(args.input))
        fout = stack.enter_context(_open_out(args.output))
        ftrace = stack.enter_context(open(args.trace, "w", encoding="utf-8")) if args.trace else None
        client = stack.enter_context(BackendClient(cfg.backend, cfg.timeout)) if cfg.backend else None
        lines = _lines(fin)
        n = 0
        while True:
            batch = list(itertools.islice(lines, max(1, args.batch_size)))
            if not batch:
                break
            for text, decision in hybrid_batch(cfg, g, batch, client):
                n += 1
                fout.write(text + "\n")
                if ftrace is not None:
                    ftrace.write(json.dumps({"line": n, **decision.__dict__}, ensure_ascii=False) + "\n")


def cmd_stats(args, g: Grammar, budget: _ErrorBudget) -> None:
    fmt = _input_format(args, args.input)
    stats = datagen.corpus_stats((p for p in _read_corpus(args.input, fmt, budget) if p is not None), g)
    report = stats.as_dict()
    with _open_out(args.output) as fout:
        if (args.format or "tsv") == "jsonl":
            fout.write(json.dumps(report) + "\n")
            return
        fout.write(f"pairs\t{stats.pairs}\nwritten_words\t{stats.written_words}\n"
                   f"itn_words\t{stats.itn_words}\nitn_density\t{_pct(stats.density)}%\n")
        for name, count in report["by_provenance"].items():
            fout.write(f"provenance:{name}\t{count}\n")
        for name, count in report["by_class"].items():
            fout.write(f"class:{name}\t{count}\n")


COMMANDS = {
    "normalize": cmd_normalize,
    "denormalize": cmd_denormalize,
    "gen-data": cmd_gen_data,
    "evaluate": cmd_evaluate,
    "hybrid-run": cmd_hybrid_run,
    "stats": cmd_stats,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = parse_args(argv)
    except ConfigError as exc:
        print(f"itnforge: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SystemExit as exc:  # argparse usage errors
        return EXIT_CONFIG if exc.code not in (0, None) else EXIT_OK
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(name)s: %(levelname)s: %(message)s", stream=sys.stderr)
    budget = _ErrorBudget(args.max_errors)
    try:
        _validate(args)
        g = load_grammar(args.grammar)
        COMMANDS[args.command](args, g, budget)
    except (ConfigError, GrammarError, ValueError) as exc:
        print(f"itnforge: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BrokenPipeError:
        return EXIT_OK
    except OSError as exc:
        print(f"itnforge: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if budget.exceeded:
        print(f"itnforge: {budget.count} record error(s), more than --max-errors {budget.cap}",
              file=sys.stderr)
        return EXIT_RECORD_ERRORS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
