"""Acceptance gate: one test per release criterion.

Each test registers its verdict through record_property; the conftest
terminal-summary hook prints one pass/fail line per criterion at the end
of the run.
"""

from __future__ import annotations

import itertools
import json
import random
import threading
import time
from fractions import Fraction

import httpx
import networkx as nx
import pytest
from scipy import integrate, stats

from corpusdiff import report as report_mod
from corpusdiff.archive import Prompt
from corpusdiff.brackets import parse_bracketed
from corpusdiff.conllu import parse_conllu
from corpusdiff.constituency import span_label_distribution
from corpusdiff.depgeom import (
    binned_arc_stats,
    expected_random_D,
    min_linear_arrangement,
    omega,
)
from corpusdiff.genclient import (
    CompletionClient,
    EndpointConfig,
    GenerationParams,
)
from corpusdiff.lexical import mtld, sttr
from corpusdiff.model import Corpus, Document, Sentence, Token
from corpusdiff.morphosyntax import pronoun_gender_ratio, upos_distribution
from corpusdiff.semantic import emotion_distribution, load_emotion_labels
from corpusdiff.stattests import pvalue_matrix, welch_t_test

from conftest import DATA_DIR
from mla_oracle import exact_minla, random_tree_edges

MLA_TIME_BUDGET_S = 300.0


def sentence_of_heads(heads: tuple[int, ...]) -> Sentence:
    tokens = [
        Token(index=i, form=f"w{i}", lemma=f"w{i}",
              upos="VERB" if h == 0 else "NOUN", feats={}, head=h,
              deprel="root" if h == 0 else "dep")
        for i, h in enumerate(heads, start=1)
    ]
    return Sentence(tokens=tokens)


def load_sample_corpus(name: str = "sample") -> Corpus:
    with open(DATA_DIR / "sample.conllu", encoding="utf-8") as handle:
        corpus = parse_conllu(handle, name=name)
    with open(DATA_DIR / "sample_trees.txt", encoding="utf-8") as handle:
        trees = parse_bracketed(handle)
    for sent, tree in zip(corpus.sentences(), trees):
        sent.const_tree = tree
    return corpus


def test_criterion_1_exact_minla(record_property) -> None:
    record_property("criterion", (
        1, "arrangement solver exact on all trees to n=8 and 200 random "
           "trees to n=25 within the time budget"
    ))
    started = time.monotonic()
    # exhaustive: every nonisomorphic free tree with up to 8 nodes
    for n in range(2, 9):
        for graph in nx.nonisomorphic_trees(n):
            edges = list(graph.edges())
            cost, order = min_linear_arrangement(n, edges)
            assert cost == exact_minla(n, edges), (n, edges)
            pos = {v: i for i, v in enumerate(order)}
            assert sum(abs(pos[u] - pos[v]) for u, v in edges) == cost
    # 200 random labeled trees spread over n = 9..25
    rng = random.Random(20240824)
    sizes = list(itertools.islice(itertools.cycle(range(9, 26)), 200))
    for n in sorted(sizes):
        edges = random_tree_edges(n, rng)
        cost, _ = min_linear_arrangement(n, edges)
        assert cost == exact_minla(n, edges), (n, edges)
    elapsed = time.monotonic() - started
    assert elapsed < MLA_TIME_BUDGET_S, f"took {elapsed:.1f}s"


def test_criterion_2_random_baseline_exact(record_property) -> None:
    record_property("criterion", (
        2, "mean dependency-length sum over all n! orders equals "
           "(n^2-1)/3 exactly and the mean optimality score is 0"
    ))
    rng = random.Random(7)
    for n in range(3, 8):
        for _ in range(10):
            edges = random_tree_edges(n, rng)
            d_min, _ = min_linear_arrangement(n, edges)
            d_rand = expected_random_D(n)
            total_d = Fraction(0)
            total_omega = Fraction(0)
            count = 0
            for perm in itertools.permutations(range(n)):
                pos = {v: i for i, v in enumerate(perm)}
                d = sum(abs(pos[u] - pos[v]) for u, v in edges)
                total_d += d
                total_omega += (d_rand - d) / (d_rand - d_min)
                count += 1
            assert total_d / count == d_rand, (n, edges)
            assert abs(float(total_omega / count)) <= 1e-12


def test_criterion_3_omega_fixed_points(record_property) -> None:
    record_property("criterion", (
        3, "optimality score is exactly 1 for an optimal linear order and "
           "exactly -0.5 for the worst 3-token star"
    ))
    assert omega(sentence_of_heads((2, 3, 0))).omega == 1.0
    assert omega(sentence_of_heads((2, 0, 2, 3))).omega == 1.0
    assert omega(sentence_of_heads((3, 3, 0))).omega == -0.5


def _reference_mtld(tokens: list[str], threshold: float) -> float | None:
    """Independent straight-line MTLD simulation (both directions)."""

    def one_pass(seq: list[str]) -> float | None:
        factors = 0.0
        start = 0
        for i in range(len(seq)):
            window = seq[start:i + 1]
            if len(set(window)) / len(window) < threshold:
                factors += 1.0
                start = i + 1
        if start < len(seq):
            window = seq[start:]
            running = len(set(window)) / len(window)
            factors += (1.0 - running) / (1.0 - threshold)
        return len(seq) / factors if factors else None

    forward = one_pass(tokens)
    backward = one_pass(tokens[::-1])
    if forward is None or backward is None:
        return None
    return (forward + backward) / 2.0


def test_criterion_4_mtld_reference_simulation(record_property) -> None:
    record_property("criterion", (
        4, "MTLD matches an independent factor-count simulation on 20 "
           "random streams within 1e-9"
    ))
    rng = random.Random(12)
    checked = 0
    while checked < 20:
        alphabet = [f"t{i}" for i in range(rng.randint(3, 12))]
        stream = [rng.choice(alphabet) for _ in range(rng.randint(30, 500))]
        expected = _reference_mtld(stream, 0.72)
        got = mtld(stream)
        if expected is None:
            assert got is None
        else:
            assert got == pytest.approx(expected, abs=1e-9)
        checked += 1


def test_criterion_5_fixture_reproduction(record_property) -> None:
    record_property("criterion", (
        5, "DOWNGRADED: released dataset unreachable from this sandbox "
           "(package mirror only); same code path reproduces frozen "
           "values on the bundled fixture corpus instead"
    ))
    corpus = load_sample_corpus()
    # frozen values derived by hand from tests/data/sample.conllu
    mean_sttr, segments = sttr(corpus, segment_size=5)
    assert mean_sttr == pytest.approx(0.92, abs=1e-12)
    assert segments == [0.8, 1.0, 0.8, 1.0, 1.0]
    upos = dict(upos_distribution(corpus).rows)
    assert upos["NOUN"] == pytest.approx(12.0, abs=1e-9)
    assert upos["PRON"] == pytest.approx(24.0, abs=1e-9)
    gender = pronoun_gender_ratio(corpus)
    assert (gender.masc, gender.fem) == (2, 3)
    assert gender.ratio == pytest.approx(2 / 3, abs=1e-12)
    stats_bins = binned_arc_stats(corpus)
    assert len(stats_bins) == 1
    assert stats_bins[0].arc_count == 20
    assert stats_bins[0].mean_len == pytest.approx(1.7, abs=1e-12)
    assert stats_bins[0].pct_left == pytest.approx(55.0, abs=1e-9)


def _t_sf_by_quadrature(t: float, df: float) -> float:
    import math

    norm = math.exp(
        math.lgamma((df + 1) / 2) - math.lgamma(df / 2)
    ) / math.sqrt(df * math.pi)
    tail, _ = integrate.quad(
        lambda x: norm * (1 + x * x / df) ** (-(df + 1) / 2), abs(t), math.inf
    )
    return 2.0 * tail


def test_criterion_6_welch_oracle(record_property) -> None:
    record_property("criterion", (
        6, "Welch t-test matches numerical-integration and scipy oracles "
           "within 1e-6 on 50 random pairs; identical samples give p=1; "
           "p-value matrices are symmetric with unit diagonal"
    ))
    rng = random.Random(31)
    for _ in range(50):
        xs = [rng.gauss(0, 1) for _ in range(rng.randint(2, 30))]
        ys = [rng.gauss(rng.uniform(-1, 1), rng.uniform(0.5, 2))
              for _ in range(rng.randint(2, 30))]
        result = welch_t_test(xs, ys)
        assert result.p == pytest.approx(
            _t_sf_by_quadrature(result.t, result.df), abs=1e-6
        )
        assert result.p == pytest.approx(
            stats.ttest_ind(xs, ys, equal_var=False).pvalue, abs=1e-6
        )
    same = welch_t_test([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
    assert same.p == 1.0 and same.t == 0.0
    samples = {
        "a": [rng.gauss(0, 1) for _ in range(15)],
        "b": [rng.gauss(0.5, 1) for _ in range(15)],
        "c": [rng.gauss(1.0, 1) for _ in range(15)],
    }
    matrix = pvalue_matrix(samples)
    for i in range(3):
        assert matrix.cells[i][i] == 1.0
        for j in range(3):
            assert matrix.cells[i][j] == matrix.cells[j][i]


def test_criterion_7_distributions_sum_to_100(record_property) -> None:
    record_property("criterion", (
        7, "UPOS, emotion, and unfiltered span distributions each sum to "
           "100; left+right arc percentages sum to 100 per bin"
    ))
    corpus = load_sample_corpus()
    assert sum(v for _, v in upos_distribution(corpus).rows) == \
        pytest.approx(100.0, abs=1e-6)
    with open(DATA_DIR / "emotions.jsonl", encoding="utf-8") as handle:
        labels = load_emotion_labels(handle)
    assert sum(v for _, v in emotion_distribution(labels).rows) == \
        pytest.approx(100.0, abs=1e-6)
    spans = span_label_distribution(corpus, min_ref_pct=0.0)
    assert sum(v for _, v in spans.rows) == pytest.approx(100.0, abs=1e-6)
    for b in binned_arc_stats(corpus):
        assert b.pct_left + b.pct_right == pytest.approx(100.0, abs=1e-6)


def test_criterion_8_deterministic_pipeline(record_property) -> None:
    record_property("criterion", (
        8, "analyze+compare+render(json) is byte-identical across runs; "
           "a corpus compared with itself shows zero differences and "
           "unit p-values"
    ))
    def build() -> tuple[bytes, report_mod.ComparisonReport]:
        options = report_mod.AnalyzeOptions(segment_size=5)
        with open(DATA_DIR / "emotions.jsonl", encoding="utf-8") as handle:
            labels = load_emotion_labels(handle)
        reference = report_mod.analyze(
            load_sample_corpus("human"), emotion_labels=labels,
            options=options,
        )
        model = report_mod.analyze(
            load_sample_corpus("model"), emotion_labels=labels,
            options=options,
        )
        report = report_mod.compare(reference, [model])
        return report_mod.render(report, "json"), report

    first, report = build()
    second, _ = build()
    assert first == second
    for table in ("upos_diff", "deprel_diff", "emotions_diff"):
        for diffs in getattr(report, table).values():
            for value in diffs.values():
                assert value is None or value == pytest.approx(0.0, abs=1e-9)
    assert report.gender["model"]["diff_pct"] == pytest.approx(0.0)
    assert report.pvalues, "expected at least one p-value matrix"
    for matrix in report.pvalues.values():
        for row in matrix["cells"]:
            assert all(p == 1.0 for p in row)


def test_criterion_9_generation_client(record_property) -> None:
    record_property("criterion", (
        9, "generation defaults serialize to the reference payload; "
           "concurrency stays within the limit; outcomes preserve input "
           "order under randomized response delays"
    ))
    assert GenerationParams().to_payload() == {
        "temperature": 0.7,
        "top_p": 0.9,
        "repetition_penalty": 1.1,
        "max_tokens": 200,
    }

    limit = 3
    lock = threading.Lock()
    state = {"now": 0, "peak": 0}
    rng = random.Random(64)
    delays = {f"p{i}": rng.uniform(0.0, 0.02) for i in range(12)}

    def handler(request: httpx.Request) -> httpx.Response:
        payload = json.loads(request.content)
        with lock:
            state["now"] += 1
            state["peak"] = max(state["peak"], state["now"])
        time.sleep(delays[payload["prompt"]])
        with lock:
            state["now"] -= 1
        return httpx.Response(200, json={"text": payload["prompt"].upper()})

    client = CompletionClient(
        config=EndpointConfig(base_url="http://testserver", model="m"),
        transport=httpx.MockTransport(handler),
        _sleep=lambda _d: None,
    )
    prompts = [Prompt(doc_id=f"d{i}", text=f"p{i}", short=False)
               for i in range(12)]
    outcomes = client.generate_corpus(prompts, max_in_flight=limit)
    assert state["peak"] <= limit
    assert [o.doc_id for o in outcomes] == [f"d{i}" for i in range(12)]
    assert all(o.doc is not None for o in outcomes)
    assert [o.doc.completion for o in outcomes] == \
        [f"P{i}" for i in range(12)]
