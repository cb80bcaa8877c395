"""Constituent span labels and span-length statistics.

A span is a non-preterminal node of the phrase-structure tree; its length
is the number of terminals it dominates. Preterminal POS nodes are not
spans: single-token POS categories would otherwise dominate the label
distribution.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from math import sqrt

from .depgeom import DEFAULT_BINS, bin_of
from .lexical import MetricError
from .model import ConstNode, Corpus
from .tables import MetricTable

DEFAULT_MIN_REF_PCT = 1.0


@dataclass(frozen=True, slots=True)
class Span:
    label: str
    length: int


@dataclass(slots=True)
class ConstBinStats:
    lo: int
    hi: int | None
    mean_len: float
    sd_len: float
    span_count: int
    sentence_count: int


def constituent_spans(tree: ConstNode) -> list[Span]:
    """Spans of every non-preterminal node in pre-order, root included."""
    def walk(node: ConstNode) -> tuple[int, list[Span]]:
        if node.is_leaf or node.is_preterminal:
            return 1, []
        length = 0
        below: list[Span] = []
        for child in node.children:
            child_len, child_spans = walk(child)
            length += child_len
            below.extend(child_spans)
        return length, [Span(label=node.label, length=length)] + below

    _, spans = walk(tree)
    return spans


def _corpus_spans(corpus: Corpus) -> list[tuple[int, list[Span]]]:
    """(sentence length, spans) per sentence that carries a tree.

    Sentence length is the dependency token count when tokens are present
    so length bins line up with the arc-statistics tables; otherwise the
    terminal count of the tree.
    """
    out: list[tuple[int, list[Span]]] = []
    for sent in corpus.sentences():
        if sent.const_tree is None:
            continue
        n = len(sent.tokens) or len(sent.const_tree.leaves())
        out.append((n, constituent_spans(sent.const_tree)))
    return out


def span_label_counts(corpus: Corpus) -> Counter:
    counts: Counter = Counter()
    for _, spans in _corpus_spans(corpus):
        counts.update(s.label for s in spans)
    return counts


def span_label_distribution(
    corpus: Corpus,
    reference: Corpus | None = None,
    min_ref_pct: float = DEFAULT_MIN_REF_PCT,
) -> MetricTable:
    """Percentage of spans per label, filtered by reference frequency.

    Labels are kept when their share of the reference corpus spans is
    strictly above min_ref_pct; percentages stay relative to all spans of
    this corpus, so the filtered rows need not sum to 100.
    """
    counts = span_label_counts(corpus)
    if not counts:
        raise MetricError("corpus has no constituency trees")
    ref_counts = span_label_counts(reference) if reference is not None else counts
    ref_total = sum(ref_counts.values())
    kept = [
        label for label in ref_counts
        if 100.0 * ref_counts[label] / ref_total > min_ref_pct
    ]
    kept.sort(key=lambda lb: (-ref_counts[lb], lb))
    total = sum(counts.values())
    rows = [(label, 100.0 * counts.get(label, 0) / total) for label in kept]
    return MetricTable(name="spans", rows=rows, unit="percent")


def binned_constituent_length_stats(
    corpus: Corpus, bins=DEFAULT_BINS
) -> list[ConstBinStats]:
    """Mean / population sd of span lengths per sentence-length bin."""
    pooled: dict[int, list[int]] = defaultdict(list)
    sent_counts: Counter = Counter()
    for n, spans in _corpus_spans(corpus):
        idx = bin_of(n, bins)
        if idx is None:
            continue
        pooled[idx].extend(s.length for s in spans)
        sent_counts[idx] += 1
    out: list[ConstBinStats] = []
    for idx, (lo, hi) in enumerate(bins):
        lengths = pooled.get(idx)
        if not lengths:
            continue
        mean = sum(lengths) / len(lengths)
        sd = sqrt(sum((x - mean) ** 2 for x in lengths) / len(lengths))
        out.append(
            ConstBinStats(
                lo=lo,
                hi=hi,
                mean_len=mean,
                sd_len=sd,
                span_count=len(lengths),
                sentence_count=sent_counts[idx],
            )
        )
    return out
