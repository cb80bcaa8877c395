"""Emotion-label distributions and embedding cosine similarities.

Classifier and embedder inference happen out of process; this module
reads their interchange files:
  emotions:   JSONL {"doc_id": ..., "label": ...} or {"doc_id": ..., "scores": {...}}
  embeddings: JSONL {"doc_id": ..., "vector": [...]}
"""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from typing import IO, Iterable

from .lexical import MetricError
from .tables import MetricTable, percentages

EMOTIONS = ("anger", "disgust", "fear", "joy", "neutral", "sadness", "surprise")


class LabelError(Exception):
    """Malformed emotion/embedding interchange data."""


def load_emotion_labels(stream: IO[str] | Iterable[str]) -> dict[str, str]:
    """doc_id -> label; score records take the argmax, ties broken by the
    fixed label order."""
    labels: dict[str, str] = {}
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise LabelError(f"line {lineno}: bad JSON: {exc}") from None
        doc_id = record.get("doc_id")
        if not doc_id:
            raise LabelError(f"line {lineno}: missing doc_id")
        if doc_id in labels:
            raise LabelError(f"line {lineno}: duplicate doc_id {doc_id!r}")
        if "label" in record:
            label = record["label"]
        elif "scores" in record:
            scores = record["scores"]
            unknown = set(scores) - set(EMOTIONS)
            if unknown:
                raise LabelError(
                    f"line {lineno}: unknown label(s) {sorted(unknown)}"
                )
            label = max(EMOTIONS, key=lambda e: (scores.get(e, float("-inf"))))
            # max() keeps the first maximum in EMOTIONS order, the tie rule
        else:
            raise LabelError(f"line {lineno}: neither label nor scores")
        if label not in EMOTIONS:
            raise LabelError(f"line {lineno}: unknown label {label!r}")
        labels[doc_id] = label
    return labels


def emotion_distribution(labels: dict[str, str]) -> MetricTable:
    """Percentage of documents per emotion; all 7 labels always present."""
    if not labels:
        raise MetricError("empty label map")
    counts = Counter(labels.values())
    return percentages(counts, "emotions", categories=list(EMOTIONS))


def load_embeddings(stream: IO[str] | Iterable[str]) -> dict[str, list[float]]:
    vectors: dict[str, list[float]] = {}
    dim: int | None = None
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise LabelError(f"line {lineno}: bad JSON: {exc}") from None
        doc_id = record.get("doc_id")
        vector = record.get("vector")
        if not doc_id or not isinstance(vector, list):
            raise LabelError(f"line {lineno}: need doc_id and vector")
        if doc_id in vectors:
            raise LabelError(f"line {lineno}: duplicate doc_id {doc_id!r}")
        vec = [float(x) for x in vector]
        if dim is None:
            dim = len(vec)
        elif len(vec) != dim:
            raise LabelError(
                f"line {lineno}: dimension {len(vec)} != {dim}"
            )
        if not any(vec):
            raise LabelError(f"line {lineno}: zero vector for {doc_id!r}")
        vectors[doc_id] = vec
    return vectors


def cosine_similarity(a: list[float], b: list[float]) -> float:
    if len(a) != len(b):
        raise MetricError(f"dimension mismatch: {len(a)} vs {len(b)}")
    norm_a = math.sqrt(sum(x * x for x in a))
    norm_b = math.sqrt(sum(x * x for x in b))
    if norm_a == 0.0 or norm_b == 0.0:
        raise MetricError("cosine similarity of a zero vector")
    return sum(x * y for x, y in zip(a, b)) / (norm_a * norm_b)


@dataclass(slots=True)
class SimilarityDistribution:
    bin_width: float
    bins: dict[float, int]
    mean: float
    paired: int
    skipped: int
    skipped_ids: list[str]


def similarity_distribution(
    reference: dict[str, list[float]],
    other: dict[str, list[float]],
    bin_width: float = 0.05,
) -> SimilarityDistribution:
    """Per-document cosine similarity between paired embeddings."""
    shared = sorted(set(reference) & set(other))
    skipped_ids = sorted(set(reference) ^ set(other))
    if not shared:
        raise MetricError("no paired documents between embedding files")
    sims = [cosine_similarity(reference[d], other[d]) for d in shared]
    bins: Counter = Counter()
    for v in sims:
        bins[round(math.floor(v / bin_width) * bin_width, 10)] += 1
    return SimilarityDistribution(
        bin_width=bin_width,
        bins=dict(sorted(bins.items())),
        mean=sum(sims) / len(sims),
        paired=len(shared),
        skipped=len(skipped_ids),
        skipped_ids=skipped_ids,
    )
