"""Quantitative comparison of annotated text corpora.

Metric battery for contrasting a reference corpus against one or more
others: lexical diversity, sentence lengths, UPOS and dependency-relation
distributions, dependency arc geometry with an exact linear-arrangement
optimality score, constituent statistics, emotion and similarity
summaries, and Welch t-test significance matrices.
"""
from .archive import ArticleRecord, Prompt, build_prompt, filter_articles, parse_archive_json
from .brackets import parse_bracketed, serialize_bracketed
from .conllu import parse_conllu, serialize_conllu
from .depgeom import (
    Arc, OmegaResult, arcs, binned_arc_stats, expected_random_D,
    min_linear_arrangement, omega, omega_distribution, sum_dep_lengths,
)
from .genclient import CompletionClient, EndpointConfig, GeneratedDoc, GenerationParams
from .lexical import MetricError, mtld, sentence_length_histogram, sttr, ttr
from .model import ConstNode, Corpus, CorpusError, Document, Sentence, Token, validate
from .morphosyntax import deprel_distribution, pronoun_gender_ratio, upos_distribution
from .constituency import (
    binned_constituent_length_stats, constituent_spans, span_label_distribution,
)
from .report import AnalysisBundle, ComparisonReport, analyze, compare, render
from .semantic import (
    cosine_similarity, emotion_distribution, load_emotion_labels,
    load_embeddings, similarity_distribution,
)
from .stattests import (
    PValueMatrix, TTestResult, pvalue_matrix, relative_difference, welch_t_test,
)
from .tables import MetricTable

__version__ = "0.1.0"
