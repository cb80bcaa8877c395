"""Sentence-length distributions and lexical diversity (TTR, STTR, MTLD).

STTR is the mean TTR over consecutive fixed-size segments of the corpus
lemma stream; MTLD averages a forward and a reverse factor-counting pass
with the McCarthy-Jarvis partial-factor convention.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .model import Corpus

DEFAULT_SEGMENT_SIZE = 1000
DEFAULT_MTLD_THRESHOLD = 0.72
DEFAULT_PLOT_CAP = 80


class MetricError(Exception):
    """A metric was asked for on input it is not defined over."""


@dataclass(slots=True)
class LengthSummary:
    histogram: dict[int, int]
    mean: float
    sd: float
    sentence_count: int


@dataclass(slots=True)
class LexicalProfile:
    sttr: float
    segment_ttrs: list[float]
    mtld: float | None
    lengths: LengthSummary | None = None


def lemma_stream(corpus: Corpus, exclude_punct: bool = False) -> list[str]:
    """Corpus lemmas in document order, case-folded for type counting."""
    return [
        tok.lemma.casefold()
        for tok in corpus.tokens()
        if not (exclude_punct and tok.upos == "PUNCT")
    ]


def sentence_length_histogram(
    corpus: Corpus, plot_cap: int | float = DEFAULT_PLOT_CAP
) -> LengthSummary:
    """Histogram of sentence lengths up to plot_cap.

    The cap only limits the histogram; mean and sd cover all sentences.
    sd is the population standard deviation.
    """
    lengths = [len(s) for s in corpus.sentences()]
    if not lengths:
        raise MetricError("empty corpus")
    histogram = Counter(n for n in lengths if n <= plot_cap)
    mean = sum(lengths) / len(lengths)
    sd = math.sqrt(sum((x - mean) ** 2 for x in lengths) / len(lengths))
    return LengthSummary(
        histogram=dict(sorted(histogram.items())),
        mean=mean,
        sd=sd,
        sentence_count=len(lengths),
    )


def ttr(tokens: list[str]) -> float:
    if not tokens:
        raise MetricError("TTR of an empty token sequence")
    return len(set(tokens)) / len(tokens)


def sttr(
    corpus: Corpus | list[str],
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    exclude_punct: bool = False,
) -> tuple[float, list[float]]:
    """Mean TTR over complete segments; the trailing partial one is dropped."""
    stream = corpus if isinstance(corpus, list) else lemma_stream(corpus, exclude_punct)
    if len(stream) < segment_size:
        raise MetricError(
            f"stream of {len(stream)} tokens is shorter than one "
            f"segment of {segment_size}"
        )
    segment_ttrs = [
        ttr(stream[i:i + segment_size])
        for i in range(0, len(stream) - segment_size + 1, segment_size)
    ]
    return sum(segment_ttrs) / len(segment_ttrs), segment_ttrs


def _mtld_one_direction(
    tokens: list[str], threshold: float, partial_factor: bool
) -> float | None:
    factors = 0.0
    types: set[str] = set()
    count = 0
    running_ttr = 1.0
    for tok in tokens:
        count += 1
        types.add(tok)
        running_ttr = len(types) / count
        if running_ttr < threshold:
            factors += 1.0
            types.clear()
            count = 0
            running_ttr = 1.0
    if partial_factor and count > 0:
        factors += (1.0 - running_ttr) / (1.0 - threshold)
    if factors == 0.0:
        return None
    return len(tokens) / factors


def mtld(
    tokens: list[str],
    threshold: float = DEFAULT_MTLD_THRESHOLD,
    partial_factor: bool = True,
) -> float | None:
    """Mean of forward and reverse factor-count passes.

    Returns None (undefined) when either direction accumulates zero
    factors, e.g. an all-distinct stream.
    """
    if not tokens:
        raise MetricError("MTLD of an empty token sequence")
    if not 0.0 < threshold < 1.0:
        raise MetricError(f"MTLD threshold {threshold} outside (0, 1)")
    forward = _mtld_one_direction(tokens, threshold, partial_factor)
    backward = _mtld_one_direction(tokens[::-1], threshold, partial_factor)
    if forward is None or backward is None:
        return None
    return (forward + backward) / 2.0


def lexical_profile(
    corpus: Corpus,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    threshold: float = DEFAULT_MTLD_THRESHOLD,
    exclude_punct: bool = False,
    partial_factor: bool = True,
    plot_cap: int | float = DEFAULT_PLOT_CAP,
) -> LexicalProfile:
    stream = lemma_stream(corpus, exclude_punct)
    mean_sttr, segment_ttrs = sttr(stream, segment_size)
    return LexicalProfile(
        sttr=mean_sttr,
        segment_ttrs=segment_ttrs,
        mtld=mtld(stream, threshold, partial_factor),
        lengths=sentence_length_histogram(corpus, plot_cap),
    )
