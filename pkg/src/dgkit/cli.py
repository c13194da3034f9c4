"""``dg``: command-line front end.

    dg cfg -g GRAMMAR
    dg parse -g GRAMMAR [-i SENTENCES] [--emit ds,pm,fstruct,sem] [--format conll|json|sexp]
    dg validate [-i STRUCTURES] [--format json|conll]
    dg convert --from ds|pm --to ds|pm [-i INPUT] [--format json|conll]

Data goes to stdout, diagnostics to stderr. Exit status: 0 success,
1 violations found or some sentence without analysis, 2 usage, format
or I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Iterable, TextIO

from . import axioms, convert, formats, functional
from .ds import DSError
from .grammar import GrammarError, gaifman_cfg, parse_grammar, render_cfg, validate_grammar
from .parser import DEFAULT_MAX_ANALYSES, AnalysisLimitExceeded, ParseError, parse

EMITS = ("ds", "pm", "fstruct", "sem")


class UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dg", description="Dependency grammar toolkit")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def common(p, grammar_required: bool = False):
        p.add_argument("-g", "--grammar", required=grammar_required, help="grammar file")
        p.add_argument("-i", "--input", default="-", help="input file (default: stdin)")

    p = sub.add_parser("cfg", help="print the Gaifman CFG of a grammar")
    p.add_argument("-g", "--grammar", required=True, help="grammar file")

    p = sub.add_parser("parse", help="parse sentences, one per line")
    common(p, grammar_required=True)
    p.add_argument("--emit", default="ds", help="comma list of ds,pm,fstruct,sem (default: ds)")
    p.add_argument("--format", choices=("conll", "json", "sexp"), default="conll")
    p.add_argument("--max-analyses", type=int, default=None, help=f"default {DEFAULT_MAX_ANALYSES}")

    p = sub.add_parser("validate", help="check dependency structures against the axioms")
    common(p)
    p.add_argument("--format", choices=("json", "conll"), default=None, help="default: sniffed")

    p = sub.add_parser("convert", help="convert between dependency structures and phrase markers")
    common(p)
    p.add_argument("--from", dest="source", choices=("ds", "pm"), required=True)
    p.add_argument("--to", dest="target", choices=("ds", "pm"), required=True)
    p.add_argument("--format", choices=("json", "conll"), default=None, help="DS format (default: sniffed / conll)")
    return ap


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _lines(path: str) -> Iterable[str]:
    if path == "-":
        yield from sys.stdin
        return
    with open(path, encoding="utf-8") as fh:
        yield from fh


def _load_grammar(path: str):
    g = parse_grammar(_read(path))
    errors = [d for d in validate_grammar(g) if d.severity == "error"]
    if errors:
        raise GrammarError("; ".join(d.message for d in errors))
    return g


def _read_structures(text: str, fmt: str | None):
    if fmt is None:
        fmt = "json" if text.lstrip()[:1] in ("{", "[") else "conll"
    return formats.read_ds_json(text) if fmt == "json" else formats.read_conll(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_cfg(args, out: TextIO) -> int:
    out.write(render_cfg(gaifman_cfg(_load_grammar(args.grammar))))
    return 0


def _analysis_items(g, analysis, emit: list[str]) -> dict:
    items: dict = {}
    if "pm" in emit:
        items["pm"] = formats.write_pm(convert.ds_to_pm(analysis.ds))
    if "fstruct" in emit or "sem" in emit:
        fs = functional.build_fstructure(analysis, g)
        fs, notes = functional.resolve_control(fs, analysis, g)
        if "fstruct" in emit:
            items["fstruct"] = functional.fstructure_to_json(fs)
        if "sem" in emit:
            term = functional.to_semantics(fs, g, notes)
            items["sem"] = functional.render_term(term, notes)
    return items


def cmd_parse(args, out: TextIO) -> int:
    emit = [e.strip() for e in args.emit.split(",") if e.strip()]
    unknown = [e for e in emit if e not in EMITS]
    if unknown or not emit:
        raise UsageError(f"--emit takes a comma list of {', '.join(EMITS)}")
    if args.format == "sexp" and "ds" in emit:
        raise UsageError("--format sexp cannot carry dependency structures; use conll or json")
    limit = args.max_analyses
    if limit is None:
        limit = int(os.environ.get("DG_MAX_ANALYSES", DEFAULT_MAX_ANALYSES))
    if limit < 1:
        raise UsageError("--max-analyses must be positive")

    g = _load_grammar(args.grammar)
    status = 0
    number = 0
    for line in _lines(args.input):
        forms = line.split()
        if not forms:
            continue
        number += 1
        truncated = False
        try:
            analyses = parse(g, forms, max_analyses=limit)
        except AnalysisLimitExceeded as exc:
            analyses, truncated = exc.analyses, True
            print(f"dg: sentence {number}: more than {limit} analyses, output truncated", file=sys.stderr)
        except ParseError as exc:
            raise ParseError(f"sentence {number}: {exc}") from None
        if not analyses:
            print(f"dg: sentence {number}: no analysis", file=sys.stderr)
            status = 1

        records = []
        for k, a in enumerate(analyses):
            records.append((k, a, _analysis_items(g, a, emit)))

        if args.format == "json":
            doc = []
            for k, a, items in records:
                entry = {"sentence": number, "analysis_index": k}
                if "ds" in emit:
                    entry["ds"] = formats.ds_to_json(a.ds)
                entry.update(items)
                doc.append(entry)
            if truncated:
                doc.append({"sentence": number, "truncated": True, "max_analyses": limit})
            out.write(formats.dumps(doc) + "\n")
        elif args.format == "conll":
            for k, a, items in records:
                out.write(f"# sentence = {number}\n# text = {' '.join(forms)}\n# analysis_index = {k}\n")
                for key in ("pm", "fstruct", "sem"):
                    if key in items:
                        value = items[key] if isinstance(items[key], str) else formats.dumps(items[key])
                        out.write(f"# {key} = {value}\n")
                if "ds" in emit:
                    out.write(formats.write_conll(a.ds))
                out.write("\n")
            if truncated:
                out.write(f"# sentence = {number}\n# truncated = true\n# max_analyses = {limit}\n\n")
        else:
            for k, a, items in records:
                for key in ("pm", "fstruct", "sem"):
                    if key in items:
                        value = items[key] if isinstance(items[key], str) else formats.dumps(items[key])
                        out.write(value + "\n")
    return status


def cmd_validate(args, out: TextIO) -> int:
    structures = _read_structures(_read(args.input), args.format)
    status = 0
    for ds in structures:
        violations = axioms.validate(ds)
        if violations:
            status = 1
        out.write(formats.dumps([v.to_json() for v in violations]) + "\n")
    return status


def cmd_convert(args, out: TextIO) -> int:
    text = _read(args.input)
    if args.source == "ds":
        structures = _read_structures(text, args.format)
    else:
        structures = [convert.pm_to_ds(formats.read_pm(line)) for line in text.splitlines() if line.strip()]

    status = 0
    fmt = args.format or ("json" if args.source == "ds" and text.lstrip()[:1] in ("{", "[") else "conll")
    for ds in structures:
        if args.target == "pm":
            try:
                out.write(formats.write_pm(convert.ds_to_pm(ds)) + "\n")
            except convert.IllFormedError as exc:
                print(f"dg: ill-formed structure: {exc}", file=sys.stderr)
                status = 1
        elif fmt == "json":
            out.write(formats.dumps(formats.ds_to_json(ds)) + "\n")
        else:
            out.write(formats.write_conll(ds) + "\n")
    return status


COMMANDS = {"cfg": cmd_cfg, "parse": cmd_parse, "validate": cmd_validate, "convert": cmd_convert}


def run(argv: list[str] | None = None, out: TextIO | None = None) -> int:
    out = out or sys.stdout
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.subcommand](args, out)
    except (
        UsageError,
        GrammarError,
        ParseError,
        formats.FormatError,
        DSError,
        functional.FunctionalError,
        OSError,
        UnicodeDecodeError,
        ValueError,
    ) as exc:
        print(f"dg: error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
