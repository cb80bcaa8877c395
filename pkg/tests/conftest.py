"""Shared fixtures: canned corpora and paths to the on-disk sample data."""

from __future__ import annotations

import io
from pathlib import Path

import pytest

from corpusdiff.brackets import parse_bracketed
from corpusdiff.conllu import parse_conllu
from corpusdiff.model import Corpus

DATA_DIR = Path(__file__).parent / "data"

# Acceptance-criterion outcomes, keyed by criterion number. Populated by
# the tests in test_acceptance.py via record_property("criterion", ...).
_ACCEPTANCE: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report) -> None:
    if report.when != "call":
        return
    for key, value in getattr(report, "user_properties", ()):
        if key == "criterion":
            number, description = value
            _ACCEPTANCE[int(number)] = (description, report.outcome)


def pytest_terminal_summary(terminalreporter, exitstatus, config) -> None:
    if not _ACCEPTANCE:
        return
    terminalreporter.write_line("")
    terminalreporter.write_line("acceptance criteria:")
    for number in sorted(_ACCEPTANCE):
        description, outcome = _ACCEPTANCE[number]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(
            f"  criterion {number} ({description}): {verdict}"
        )


def corpus_from(text: str, name: str = "test") -> Corpus:
    """Parse an inline CoNLL-U snippet into a Corpus."""
    return parse_conllu(io.StringIO(text), name=name)


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture()
def sample_corpus() -> Corpus:
    with open(DATA_DIR / "sample.conllu", encoding="utf-8") as handle:
        return parse_conllu(handle, name="sample")


@pytest.fixture()
def sample_corpus_with_trees(sample_corpus: Corpus) -> Corpus:
    with open(DATA_DIR / "sample_trees.txt", encoding="utf-8") as handle:
        trees = parse_bracketed(handle)
    sentences = list(sample_corpus.sentences())
    assert len(trees) == len(sentences)
    for sentence, tree in zip(sentences, trees):
        sentence.const_tree = tree
    return sample_corpus
