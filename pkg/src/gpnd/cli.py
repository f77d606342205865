"""Command-line interface: ``gpnd check|render|extract|normalize|prove``.

Exit status is 0 on success, 1 when a proof is rejected or a requested
result does not exist, and 2 for usage and parse errors.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import os
import sys
from importlib import resources
from pathlib import Path
from typing import Optional

from .curry_howard import extract, format_lambda, normalize, reductions
from .errors import GpndError, ParseError, UncheckedLemma
from .kernel import Environment, Mode, check_document
from .proof_format import Lemma, format_lemma, parse_document, parse_formula
from .render import RenderOptions, render
from .search import MAX_DEPTH, prove

EXIT_OK, EXIT_REJECTED, EXIT_USAGE = 0, 1, 2
PRELUDES = ("arith.gpnd", "sets.gpnd")
CLASSICAL_PRELUDE = "classical.gpnd"


class _UsageError(Exception):
    pass


# ----------------------------------------------------------------- preludes

def _prelude_sources(classical: bool) -> list:
    """``(name, text)`` pairs in load order."""
    override = os.environ.get("GPND_PRELUDE_DIR")
    if override:
        files = sorted(Path(override).glob("*.gpnd"))
        return [(str(p), p.read_text(encoding="utf-8")) for p in files
                if classical or p.name != CLASSICAL_PRELUDE]
    names = list(PRELUDES) + ([CLASSICAL_PRELUDE] if classical else [])
    base = resources.files("gpnd") / "prelude"
    return [(f"prelude/{n}", (base / n).read_text(encoding="utf-8")) for n in names]


def load_preludes(classical: bool = False) -> Environment:
    mode = Mode.CLASSICAL if classical else Mode.INTUITIONISTIC
    env = Environment()
    for name, text in _prelude_sources(classical):
        try:
            doc = parse_document(text)
        except ParseError as exc:
            raise _UsageError(f"{name}:{exc}") from exc
        report = check_document(doc, mode, env)
        if not report.accepted:
            first = report.diagnostics[0]
            raise _UsageError(f"{name}: prelude rejected: {first.kind} in {first.lemma}: {first.message}")
        env = report.environment
    return env


# ------------------------------------------------------------------ helpers

def _gpnd_files(inputs: list) -> list:
    files = []
    for item in inputs:
        p = Path(item)
        if p.is_dir():
            files.extend(sorted(str(q) for q in p.rglob("*.gpnd")))
        elif p.exists():
            files.append(item)
        else:
            raise _UsageError(f"{item}: no such file or directory")
    return files


def _read(path: str):
    try:
        return parse_document(Path(path).read_text(encoding="utf-8"))
    except ParseError as exc:
        raise _UsageError(f"{path}:{exc}") from exc
    except OSError as exc:
        raise _UsageError(f"{path}: {exc.strerror}") from exc


def _environment(args) -> Environment:
    return Environment() if args.no_prelude else load_preludes(args.classical)


def _mode(args) -> Mode:
    return Mode.CLASSICAL if args.classical else Mode.INTUITIONISTIC


def _pick(doc, name: Optional[str], path: str) -> list:
    if name is None:
        return list(doc.lemmas)
    try:
        return [doc.lemma(name)]
    except KeyError:
        raise _UsageError(f"{path}: no lemma named {name}") from None


def _count(n: int, noun: str) -> str:
    return f"{n} {noun}{'' if n == 1 else 's'}"


def diagnostic_line(path: str, diag) -> str:
    return f"{path}|{diag.kind}|{diag.lemma}:{diag.dotted_path}|{diag.message}"


def diagnostic_record(path: str, diag) -> dict:
    return {"file": path, "class": diag.kind, "lemma": diag.lemma, "path": ".".join(map(str, diag.path)),
            "labels": list(diag.detail), "message": diag.message}


# ----------------------------------------------------------------- commands

def cmd_check(args, out, err) -> int:
    files = _gpnd_files(args.inputs)
    env = _environment(args)
    status = EXIT_OK
    for path in files:
        try:
            doc = _read(path)
        except _UsageError as exc:
            print(exc, file=err)
            status = EXIT_USAGE
            continue
        report = check_document(doc, _mode(args), env)
        if args.json:
            for d in report.diagnostics:
                print(json.dumps(diagnostic_record(path, d), sort_keys=True), file=err)
            summary = {"file": path, "status": report.status, "lemmas": len(doc.lemmas),
                       "nodes": report.statistics["nodes"]}
            print(json.dumps(summary, sort_keys=True), file=out)
        else:
            for d in report.diagnostics:
                print(diagnostic_line(path, d), file=err)
            print(f"{path}: {report.status} ({_count(len(doc.lemmas), 'lemma')}, "
                  f"{_count(len(report.diagnostics), 'diagnostic')})", file=out)
        if not report.accepted and status == EXIT_OK:
            status = EXIT_REJECTED
    return status


def _checked_document(args, err):
    doc = _read(args.file)
    report = check_document(doc, _mode(args), _environment(args))
    return doc, report


def cmd_render(args, out, err) -> int:
    opts = RenderOptions(args.format, args.contexts, args.unicode, args.width)
    doc, report = _checked_document(args, err)
    chunks = []
    for lemma in _pick(doc, args.lemma, args.file):
        if args.format != "prose":
            chunks.append(f"{lemma.name}:\n" + render(lemma, opts))
        else:
            chunks.append(render(lemma, opts, report))
    out.write("\n".join(chunks))
    return EXIT_OK


def _lemma_term(args, err):
    doc, report = _checked_document(args, err)
    lemma = _pick(doc, args.lemma, args.file)[0]
    if lemma.name not in report.environment.rules:
        raise UncheckedLemma(f"lemma {lemma.name} has not been accepted")
    return lemma, extract(lemma.root, lemma.hypotheses, report.environment)


def cmd_extract(args, out, err) -> int:
    _, term = _lemma_term(args, err)
    print(format_lambda(term, args.unicode), file=out)
    return EXIT_OK


def cmd_normalize(args, out, err) -> int:
    lemma, term = _lemma_term(args, err)
    normal = normalize(term, args.step_limit, lemma.hypotheses)
    if args.steps:
        count = sum(1 for _ in reductions(term, lemma.hypotheses, args.step_limit))
        print(f"# {count} reduction steps", file=out)
    print(format_lambda(normal, args.unicode), file=out)
    return EXIT_OK


def cmd_prove(args, out, err) -> int:
    if not 0 <= args.depth <= MAX_DEPTH:
        raise _UsageError(f"--depth must be between 0 and {MAX_DEPTH}")
    try:
        goal = parse_formula(args.formula)
    except ParseError as exc:
        raise _UsageError(f"formula:{exc}") from exc
    try:
        proof = prove(goal, (), args.depth)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    if proof is None:
        print(f"not found at depth {args.depth}", file=err)
        return EXIT_REJECTED
    print(format_lemma(Lemma(args.name, (), goal, proof)), file=out)
    return EXIT_OK


# ------------------------------------------------------------------ parsing

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gpnd", description="Natural deduction proof checker.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, file_arg=True):
        p.add_argument("--classical", action="store_true", help="allow PEM and NNE")
        p.add_argument("--no-prelude", action="store_true", help="do not load the prelude documents")
        if file_arg:
            p.add_argument("file")
            p.add_argument("--lemma", help="lemma name (default: every lemma, or the first one)")

    check = sub.add_parser("check", help="check proof documents")
    check.add_argument("inputs", nargs="+", metavar="FILE")
    check.add_argument("--json", action="store_true", help="emit JSON records")
    common(check, file_arg=False)
    check.set_defaults(run=cmd_check)

    rend = sub.add_parser("render", help="render proofs")
    common(rend)
    rend.add_argument("--format", choices=("ascii", "latex", "prose"), default="ascii")
    rend.add_argument("--unicode", action="store_true")
    rend.add_argument("--contexts", action="store_true", help="show available hypotheses")
    rend.add_argument("--width", type=int, default=120)
    rend.set_defaults(run=cmd_render)

    for name, fn, text in (("extract", cmd_extract, "print the lambda term of a lemma"),
                           ("normalize", cmd_normalize, "print the normal form of a lemma's term")):
        p = sub.add_parser(name, help=text)
        common(p)
        p.add_argument("--unicode", action="store_true")
        if name == "normalize":
            p.add_argument("--step-limit", type=int, default=10_000)
            p.add_argument("--steps", action="store_true", help="report the number of reduction steps")
        p.set_defaults(run=fn)

    pr = sub.add_parser("prove", help="search for a propositional proof")
    pr.add_argument("formula")
    pr.add_argument("--depth", type=int, default=12)
    pr.add_argument("--name", default="found")
    pr.set_defaults(run=cmd_prove)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "width", 40) < 40:
            raise _UsageError("--width must be at least 40")
        return args.run(args, out, err)
    except _UsageError as exc:
        err.write(parser.format_usage())
        print(f"gpnd: {exc}", file=err)
        return EXIT_USAGE
    except GpndError as exc:
        print(f"gpnd: {exc}", file=err)
        return EXIT_REJECTED


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
