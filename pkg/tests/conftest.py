from __future__ import annotations

from pathlib import Path

import pytest

from gpnd.cli import load_preludes
from gpnd.kernel import Mode, check_document
from gpnd.proof_format import parse_document

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
NEGATIVE = ROOT / "negative"
PRELUDE = ROOT / "src" / "gpnd" / "prelude"

ACCEPTANCE_LINES: list = []


def read_doc(path: Path):
    return parse_document(path.read_text(encoding="utf-8"))


def corpus_files():
    return sorted(CORPUS.glob("*.gpnd"))


def prelude_files():
    return sorted(PRELUDE.glob("*.gpnd"))


def mode_for(path: Path) -> Mode:
    return Mode.CLASSICAL if path.name == "classical.gpnd" else Mode.INTUITIONISTIC


@pytest.fixture(scope="session")
def prelude_env():
    return load_preludes(classical=False)


@pytest.fixture(scope="session")
def checked_corpus(prelude_env):
    """``{path: (document, report)}`` for every corpus file, checked with the preludes."""
    out = {}
    for path in corpus_files():
        doc = read_doc(path)
        out[path] = (doc, check_document(doc, Mode.INTUITIONISTIC, prelude_env))
    return out


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
