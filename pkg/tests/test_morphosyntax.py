"""UPOS/deprel frequency tables and the pronoun gender ratio."""

from __future__ import annotations

import pytest

from corpusdiff.lexical import MetricError
from corpusdiff.model import Corpus, Document, Sentence, Token, UPOS_TAGS
from corpusdiff.morphosyntax import (
    deprel_distribution,
    pronoun_gender_ratio,
    upos_distribution,
)


def corpus_of_tags(specs: list[tuple[str, str]]) -> Corpus:
    """One single-clause sentence per call: (upos, deprel) per token.

    The first token is forced to be the root so the sentence validates.
    """
    tokens = []
    for i, (upos, deprel) in enumerate(specs, start=1):
        feats = {}
        head = 0 if i == 1 else 1
        tokens.append(
            Token(index=i, form=f"w{i}", lemma=f"w{i}", upos=upos,
                  feats=feats, head=head, deprel="root" if i == 1 else deprel)
        )
    sent = Sentence(tokens=tokens)
    return Corpus(name="tags", documents=[Document("d", [sent])])


def test_single_noun_is_100_percent() -> None:
    table = upos_distribution(corpus_of_tags([("NOUN", "root")]))
    values = dict(table.rows)
    assert values["NOUN"] == pytest.approx(100.0)
    assert len(table.rows) == 17
    assert sum(values.values()) == pytest.approx(100.0)


def test_even_noun_verb_split() -> None:
    corpus = corpus_of_tags(
        [("VERB", "root"), ("NOUN", "obj"), ("VERB", "xcomp"), ("NOUN", "obj")]
    )
    values = dict(upos_distribution(corpus).rows)
    assert values["NOUN"] == pytest.approx(50.0)
    assert values["VERB"] == pytest.approx(50.0)
    assert values["ADJ"] == 0.0


def test_upos_rows_ordered_by_count_then_tag() -> None:
    corpus = corpus_of_tags(
        [("VERB", "root"), ("NOUN", "obj"), ("NOUN", "obj"), ("ADJ", "amod")]
    )
    table = upos_distribution(corpus)
    assert [r[0] for r in table.rows[:3]] == ["NOUN", "ADJ", "VERB"]
    assert set(r[0] for r in table.rows) == set(UPOS_TAGS)


def test_upos_empty_corpus_raises() -> None:
    with pytest.raises(MetricError):
        upos_distribution(Corpus(name="e", documents=[]))


def test_deprel_filter_is_strictly_above_threshold() -> None:
    # 100 tokens: "det" and "root" sit at exactly 1% and must be excluded.
    specs = [("VERB", "root")] + [("NOUN", "obj")] * 98 + [("DET", "det")]
    corpus = corpus_of_tags(specs)
    table = deprel_distribution(corpus, min_ref_pct=1.0)
    rels = [r[0] for r in table.rows]
    assert "det" not in rels and "root" not in rels
    assert rels == ["obj"]
    assert dict(table.rows)["obj"] == pytest.approx(98.0)


def test_deprel_rows_follow_reference_not_target() -> None:
    reference = corpus_of_tags(
        [("VERB", "root"), ("NOUN", "obj"), ("NOUN", "obj"), ("NOUN", "obj")]
    )
    target = corpus_of_tags(
        [("VERB", "root"), ("NOUN", "nsubj"), ("NOUN", "nsubj")]
    )
    table = deprel_distribution(target, reference=reference)
    assert [r[0] for r in table.rows] == ["obj", "root"]
    values = dict(table.rows)
    assert values["obj"] == 0.0
    assert values["root"] == pytest.approx(100.0 / 3)


def test_gender_ratio_two_to_one() -> None:
    tokens = [
        Token(1, "saw", "see", "VERB", {}, 0, "root"),
        Token(2, "he", "he", "PRON", {"Gender": "Masc"}, 1, "nsubj"),
        Token(3, "him", "he", "PRON", {"Gender": "Masc"}, 1, "obj"),
        Token(4, "her", "she", "PRON", {"Gender": "Fem"}, 1, "iobj"),
        Token(5, "actor", "actor", "NOUN", {"Gender": "Masc"}, 1, "obl"),
        Token(6, "it", "it", "PRON", {}, 1, "obj"),
    ]
    corpus = Corpus("g", [Document("d", [Sentence(tokens=tokens)])])
    counts = pronoun_gender_ratio(corpus)
    assert (counts.masc, counts.fem) == (2, 1)
    assert counts.ratio == pytest.approx(2.0)


def test_gender_ratio_undefined_without_feminine() -> None:
    tokens = [
        Token(1, "he", "he", "PRON", {"Gender": "Masc"}, 0, "root"),
    ]
    corpus = Corpus("g", [Document("d", [Sentence(tokens=tokens)])])
    assert pronoun_gender_ratio(corpus).ratio is None


def test_sample_corpus_gender_counts(sample_corpus) -> None:
    counts = pronoun_gender_ratio(sample_corpus)
    assert (counts.masc, counts.fem) == (2, 3)
    assert counts.ratio == pytest.approx(2 / 3)
