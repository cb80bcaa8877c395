"""UPOS and dependency-relation frequency tables, pronoun gender ratio."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .lexical import MetricError
from .model import Corpus, UPOS_TAGS
from .tables import MetricTable, percentages

DEFAULT_MIN_REF_PCT = 1.0


@dataclass(slots=True)
class GenderCounts:
    masc: int
    fem: int

    @property
    def ratio(self) -> float | None:
        if self.fem == 0:
            return None
        return self.masc / self.fem


def upos_distribution(corpus: Corpus) -> MetricTable:
    """Percentage of tokens per UPOS tag; all 17 tags always present."""
    counts = Counter(tok.upos for tok in corpus.tokens())
    if not counts:
        raise MetricError("empty corpus")
    ordered = sorted(UPOS_TAGS, key=lambda t: (-counts.get(t, 0), t))
    return percentages(counts, "upos", categories=ordered)


def deprel_counts(corpus: Corpus) -> Counter:
    return Counter(tok.deprel for tok in corpus.tokens())


def deprel_distribution(
    corpus: Corpus,
    reference: Corpus | None = None,
    min_ref_pct: float = DEFAULT_MIN_REF_PCT,
) -> MetricTable:
    """Token percentage per dependency relation (root arcs count as "root").

    Rows are restricted to relations whose frequency in the reference
    corpus is strictly above min_ref_pct; percentages are over all tokens,
    so the filtered rows need not sum to 100.
    """
    counts = deprel_counts(corpus)
    if not counts:
        raise MetricError("empty corpus")
    ref_counts = deprel_counts(reference) if reference is not None else counts
    ref_total = sum(ref_counts.values())
    kept = [
        rel for rel in ref_counts
        if 100.0 * ref_counts[rel] / ref_total > min_ref_pct
    ]
    kept.sort(key=lambda r: (-ref_counts[r], r))
    total = sum(counts.values())
    rows = [(rel, 100.0 * counts.get(rel, 0) / total) for rel in kept]
    return MetricTable(name="deprel", rows=rows, unit="percent")


def pronoun_gender_ratio(corpus: Corpus) -> GenderCounts:
    """Counts of PRON tokens carrying Gender=Masc / Gender=Fem."""
    masc = fem = 0
    for tok in corpus.tokens():
        if tok.upos != "PRON":
            continue
        gender = tok.feats.get("Gender")
        if gender == "Masc":
            masc += 1
        elif gender == "Fem":
            fem += 1
    return GenderCounts(masc=masc, fem=fem)
