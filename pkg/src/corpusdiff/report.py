"""Per-corpus analysis bundles and reference-vs-models comparison reports.

analyze() runs every metric over one corpus and returns a bundle that can
be persisted as JSON; compare() assembles bundles into a report with
relative-difference tables and p-value matrices; render() emits the
report as markdown, TSV, or lossless JSON.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import constituency, depgeom, lexical, morphosyntax, semantic, stattests
from .lexical import MetricError
from .model import Corpus
from .stattests import PValueMatrix
from .tables import MetricTable

RENDER_FORMATS = ("markdown", "tsv", "json")


@dataclass(slots=True)
class AnalyzeOptions:
    segment_size: int = lexical.DEFAULT_SEGMENT_SIZE
    mtld_threshold: float = lexical.DEFAULT_MTLD_THRESHOLD
    exclude_punct: bool = False
    partial_factor: bool = True
    plot_cap: float = lexical.DEFAULT_PLOT_CAP
    omega_bin_width: float = 0.05
    similarity_bin_width: float = 0.05


@dataclass(slots=True)
class AnalysisBundle:
    name: str
    token_count: int
    sentence_count: int
    sentence_lengths: list[int]
    arc_lengths: list[int]
    sttr: float | None
    segment_ttrs: list[float]
    mtld: float | None
    length_histogram: list[list[float]]  # [bin_start, bin_end, count]
    length_mean: float
    length_sd: float
    upos: MetricTable
    deprel_counts: dict[str, int]
    arc_stats: list[dict]
    omega_histogram: list[list[float]]
    omega_mean: float | None
    omega_skipped: int
    span_counts: dict[str, int] | None
    const_stats: list[dict] | None
    gender_masc: int
    gender_fem: int
    emotions: MetricTable | None
    embeddings: dict[str, list[float]] | None

    def to_dict(self) -> dict:
        data = {
            "name": self.name,
            "token_count": self.token_count,
            "sentence_count": self.sentence_count,
            "sentence_lengths": self.sentence_lengths,
            "arc_lengths": self.arc_lengths,
            "sttr": self.sttr,
            "segment_ttrs": self.segment_ttrs,
            "mtld": self.mtld,
            "length_histogram": self.length_histogram,
            "length_mean": self.length_mean,
            "length_sd": self.length_sd,
            "upos": self.upos.to_dict(),
            "deprel_counts": self.deprel_counts,
            "arc_stats": self.arc_stats,
            "omega_histogram": self.omega_histogram,
            "omega_mean": self.omega_mean,
            "omega_skipped": self.omega_skipped,
            "span_counts": self.span_counts,
            "const_stats": self.const_stats,
            "gender_masc": self.gender_masc,
            "gender_fem": self.gender_fem,
            "emotions": self.emotions.to_dict() if self.emotions else None,
            "embeddings": self.embeddings,
        }
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "AnalysisBundle":
        return cls(
            name=data["name"],
            token_count=data["token_count"],
            sentence_count=data["sentence_count"],
            sentence_lengths=list(data["sentence_lengths"]),
            arc_lengths=list(data["arc_lengths"]),
            sttr=data["sttr"],
            segment_ttrs=list(data["segment_ttrs"]),
            mtld=data["mtld"],
            length_histogram=[list(r) for r in data["length_histogram"]],
            length_mean=data["length_mean"],
            length_sd=data["length_sd"],
            upos=MetricTable.from_dict(data["upos"]),
            deprel_counts=dict(data["deprel_counts"]),
            arc_stats=[dict(r) for r in data["arc_stats"]],
            omega_histogram=[list(r) for r in data["omega_histogram"]],
            omega_mean=data["omega_mean"],
            omega_skipped=data["omega_skipped"],
            span_counts=dict(data["span_counts"]) if data["span_counts"] else None,
            const_stats=[dict(r) for r in data["const_stats"]]
            if data["const_stats"] else None,
            gender_masc=data["gender_masc"],
            gender_fem=data["gender_fem"],
            emotions=MetricTable.from_dict(data["emotions"])
            if data["emotions"] else None,
            embeddings=data["embeddings"],
        )


def _bin_dict(b: depgeom.BinStats) -> dict:
    return {
        "lo": b.lo, "hi": b.hi,
        "pct_left": b.pct_left, "pct_right": b.pct_right,
        "mean_len": b.mean_len,
        "mean_len_left": b.mean_len_left, "mean_len_right": b.mean_len_right,
        "sd_len": b.sd_len,
        "sd_len_left": b.sd_len_left, "sd_len_right": b.sd_len_right,
        "arc_count": b.arc_count, "sentence_count": b.sentence_count,
    }


def _const_bin_dict(b: constituency.ConstBinStats) -> dict:
    return {
        "lo": b.lo, "hi": b.hi,
        "mean_len": b.mean_len, "sd_len": b.sd_len,
        "span_count": b.span_count, "sentence_count": b.sentence_count,
    }


def analyze(
    corpus: Corpus,
    emotion_labels: dict[str, str] | None = None,
    embeddings: dict[str, list[float]] | None = None,
    options: AnalyzeOptions | None = None,
) -> AnalysisBundle:
    """Run every metric module over one corpus.

    Missing optional inputs (emotions, embeddings, constituency trees)
    yield absent sections. STTR is absent when the corpus is shorter than
    one segment.
    """
    opts = options or AnalyzeOptions()
    sentences = corpus.sentences()
    if not sentences:
        raise MetricError("empty corpus")

    stream = lexical.lemma_stream(corpus, opts.exclude_punct)
    try:
        sttr_value, segment_ttrs = lexical.sttr(stream, opts.segment_size)
    except MetricError:
        sttr_value, segment_ttrs = None, []
    mtld_value = lexical.mtld(stream, opts.mtld_threshold, opts.partial_factor)
    lengths = lexical.sentence_length_histogram(corpus, opts.plot_cap)

    arc_lengths = [a.length for s in sentences for a in depgeom.arcs(s)]
    arc_stats = [_bin_dict(b) for b in depgeom.binned_arc_stats(corpus)]
    omega_hist = depgeom.omega_distribution(corpus, opts.omega_bin_width)
    omega_mean = (
        sum(omega_hist.values) / len(omega_hist.values)
        if omega_hist.values else None
    )

    has_trees = any(s.const_tree is not None for s in sentences)
    span_counts = (
        dict(sorted(constituency.span_label_counts(corpus).items()))
        if has_trees else None
    )
    const_stats = (
        [_const_bin_dict(b)
         for b in constituency.binned_constituent_length_stats(corpus)]
        if has_trees else None
    )

    gender = morphosyntax.pronoun_gender_ratio(corpus)
    emotions = (
        semantic.emotion_distribution(emotion_labels)
        if emotion_labels else None
    )

    return AnalysisBundle(
        name=corpus.name,
        token_count=sum(len(s) for s in sentences),
        sentence_count=len(sentences),
        sentence_lengths=[len(s) for s in sentences],
        arc_lengths=arc_lengths,
        sttr=sttr_value,
        segment_ttrs=segment_ttrs,
        mtld=mtld_value,
        length_histogram=[
            [float(k), float(k + 1), float(v)]
            for k, v in lengths.histogram.items()
        ],
        length_mean=lengths.mean,
        length_sd=lengths.sd,
        upos=morphosyntax.upos_distribution(corpus),
        deprel_counts=dict(sorted(morphosyntax.deprel_counts(corpus).items())),
        arc_stats=arc_stats,
        omega_histogram=[
            [k, round(k + omega_hist.bin_width, 10), float(v)]
            for k, v in omega_hist.bins.items()
        ],
        omega_mean=omega_mean,
        omega_skipped=omega_hist.skipped,
        span_counts=span_counts,
        const_stats=const_stats,
        gender_masc=gender.masc,
        gender_fem=gender.fem,
        emotions=emotions,
        embeddings=dict(embeddings) if embeddings else None,
    )


@dataclass(slots=True)
class ComparisonReport:
    reference: str
    corpora: list[str]  # reference first
    lexical: dict                       # per-corpus {"sttr", "mtld"}
    upos: dict                          # per-corpus table dict
    upos_diff: dict                     # per-model {category: pct diff}
    deprel: dict
    deprel_diff: dict
    spans: dict
    spans_diff: dict
    emotions: dict
    emotions_diff: dict
    arc_stats: dict
    const_stats: dict
    histograms: dict                    # name -> per-corpus [[start, end, count]]
    gender: dict                        # per-corpus {"masc","fem","ratio","diff_pct"}
    pvalues: dict                       # metric -> PValueMatrix dict
    min_ref_pct: float = 1.0

    def to_dict(self) -> dict:
        return {
            "reference": self.reference,
            "corpora": self.corpora,
            "lexical": self.lexical,
            "upos": self.upos,
            "upos_diff": self.upos_diff,
            "deprel": self.deprel,
            "deprel_diff": self.deprel_diff,
            "spans": self.spans,
            "spans_diff": self.spans_diff,
            "emotions": self.emotions,
            "emotions_diff": self.emotions_diff,
            "arc_stats": self.arc_stats,
            "const_stats": self.const_stats,
            "histograms": self.histograms,
            "gender": self.gender,
            "pvalues": self.pvalues,
            "min_ref_pct": self.min_ref_pct,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ComparisonReport":
        return cls(**{k: data[k] for k in (
            "reference", "corpora", "lexical", "upos", "upos_diff",
            "deprel", "deprel_diff", "spans", "spans_diff", "emotions",
            "emotions_diff", "arc_stats", "const_stats", "histograms",
            "gender", "pvalues", "min_ref_pct",
        )})


def _pct_table_from_counts(
    counts: dict[str, int], kept: list[str], name: str
) -> MetricTable:
    total = sum(counts.values())
    rows = [(cat, 100.0 * counts.get(cat, 0) / total) for cat in kept]
    return MetricTable(name=name, rows=rows, unit="percent")


def _diff_rows(model: MetricTable, ref: MetricTable) -> dict[str, float | None]:
    out: dict[str, float | None] = {}
    ref_map = dict(ref.rows)
    for cat, val in model.rows:
        ref_val = ref_map.get(cat)
        if ref_val:
            out[cat] = stattests.relative_difference(val, ref_val)
        else:
            out[cat] = None
    return out


def compare(
    reference: AnalysisBundle,
    models: list[AnalysisBundle],
    min_ref_pct: float = 1.0,
) -> ComparisonReport:
    """Assemble the reference-vs-models comparison report."""
    if not models:
        raise MetricError("compare needs at least one model bundle")
    bundles = [reference] + models
    names = [b.name for b in bundles]

    lexical_section = {
        b.name: {"sttr": b.sttr, "mtld": b.mtld} for b in bundles
    }

    # UPOS: categories ordered by the reference corpus, descending
    ref_order = [cat for cat, _ in reference.upos.rows]
    upos_tables = {
        b.name: MetricTable(
            name="upos",
            rows=[(c, dict(b.upos.rows).get(c, 0.0)) for c in ref_order],
            unit="percent",
        )
        for b in bundles
    }
    upos_diff = {
        b.name: _diff_rows(upos_tables[b.name], upos_tables[reference.name])
        for b in models
    }

    # deprel: filter by reference frequency strictly above min_ref_pct
    ref_total = sum(reference.deprel_counts.values())
    kept = [
        rel for rel in reference.deprel_counts
        if 100.0 * reference.deprel_counts[rel] / ref_total > min_ref_pct
    ]
    kept.sort(key=lambda r: (-reference.deprel_counts[r], r))
    deprel_tables = {
        b.name: _pct_table_from_counts(b.deprel_counts, kept, "deprel")
        for b in bundles
    }
    deprel_diff = {
        b.name: _diff_rows(deprel_tables[b.name], deprel_tables[reference.name])
        for b in models
    }

    # constituent spans, when every bundle with trees can participate
    spans_tables: dict[str, MetricTable] = {}
    spans_diff: dict[str, dict] = {}
    if reference.span_counts:
        ref_span_total = sum(reference.span_counts.values())
        kept_spans = [
            lb for lb in reference.span_counts
            if 100.0 * reference.span_counts[lb] / ref_span_total > min_ref_pct
        ]
        kept_spans.sort(key=lambda lb: (-reference.span_counts[lb], lb))
        for b in bundles:
            if b.span_counts:
                spans_tables[b.name] = _pct_table_from_counts(
                    b.span_counts, kept_spans, "spans"
                )
        for b in models:
            if b.name in spans_tables:
                spans_diff[b.name] = _diff_rows(
                    spans_tables[b.name], spans_tables[reference.name]
                )

    emotions_tables = {
        b.name: b.emotions for b in bundles if b.emotions is not None
    }
    emotions_diff = {}
    if reference.emotions is not None:
        for b in models:
            if b.emotions is not None:
                emotions_diff[b.name] = _diff_rows(b.emotions, reference.emotions)

    gender = {}
    ref_ratio = (
        reference.gender_masc / reference.gender_fem
        if reference.gender_fem else None
    )
    for b in bundles:
        ratio = b.gender_masc / b.gender_fem if b.gender_fem else None
        diff = None
        if b.name != reference.name and ratio is not None and ref_ratio:
            diff = stattests.relative_difference(ratio, ref_ratio)
        gender[b.name] = {
            "masc": b.gender_masc, "fem": b.gender_fem,
            "ratio": ratio, "diff_pct": diff,
        }

    histograms = {
        "sentence_length": {b.name: b.length_histogram for b in bundles},
        "omega": {b.name: b.omega_histogram for b in bundles},
    }
    similarity: dict[str, list] = {}
    if reference.embeddings:
        for b in models:
            if b.embeddings:
                dist = semantic.similarity_distribution(
                    reference.embeddings, b.embeddings
                )
                similarity[b.name] = [
                    [k, round(k + dist.bin_width, 10), float(v)]
                    for k, v in dist.bins.items()
                ]
    if similarity:
        histograms["similarity"] = similarity

    pvalues: dict[str, dict] = {}
    for metric, attr in (
        ("sentence_length", "sentence_lengths"),
        ("arc_length", "arc_lengths"),
        ("segment_ttr", "segment_ttrs"),
    ):
        samples = {
            b.name: [float(x) for x in getattr(b, attr)] for b in bundles
        }
        if all(len(v) >= 2 for v in samples.values()):
            pvalues[metric] = stattests.pvalue_matrix(samples).to_dict()

    return ComparisonReport(
        reference=reference.name,
        corpora=names,
        lexical=lexical_section,
        upos={k: t.to_dict() for k, t in upos_tables.items()},
        upos_diff=upos_diff,
        deprel={k: t.to_dict() for k, t in deprel_tables.items()},
        deprel_diff=deprel_diff,
        spans={k: t.to_dict() for k, t in spans_tables.items()},
        spans_diff=spans_diff,
        emotions={k: t.to_dict() for k, t in emotions_tables.items()},
        emotions_diff=emotions_diff,
        arc_stats={b.name: b.arc_stats for b in bundles},
        const_stats={
            b.name: b.const_stats for b in bundles
            if b.const_stats is not None
        },
        histograms=histograms,
        gender=gender,
        pvalues=pvalues,
        min_ref_pct=min_ref_pct,
    )


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.2f}"
    return str(value)


def _table_block(
    title: str, tables: dict[str, dict], corpora: list[str], sep: str
) -> list[str]:
    present = [c for c in corpora if c in tables]
    if not present:
        return []
    lines = []
    if sep == " | ":
        lines.append(f"## {title}")
        lines.append("")
        header = ["category"] + present
        lines.append("| " + " | ".join(header) + " |")
        lines.append("|" + "---|" * len(header))
    else:
        lines.append(f"# {title}")
        lines.append(sep.join(["category"] + present))
    categories = [cat for cat, _ in tables[present[0]]["rows"]]
    for cat in categories:
        row = [cat]
        for name in present:
            row.append(_fmt(dict(tables[name]["rows"]).get(cat)))
        if sep == " | ":
            lines.append("| " + " | ".join(row) + " |")
        else:
            lines.append(sep.join(row))
    lines.append("")
    return lines


def render(report: ComparisonReport, format: str = "markdown") -> bytes:
    """Render a report; markdown/tsv use 2-decimal percents, json is
    lossless."""
    if format not in RENDER_FORMATS:
        raise MetricError(
            f"unknown format {format!r}; expected one of {RENDER_FORMATS}"
        )
    if format == "json":
        text = json.dumps(report.to_dict(), sort_keys=True, indent=2)
        return (text + "\n").encode("utf-8")

    sep = " | " if format == "markdown" else "\t"
    lines: list[str] = []
    title = f"Corpus comparison vs {report.reference}"
    lines.append(("# " if format == "markdown" else "") + title)
    lines.append("")

    lex_rows = {
        name: {
            "name": "lexical", "unit": "score",
            "rows": [
                ("STTR", vals["sttr"]), ("MTLD", vals["mtld"]),
            ],
        }
        for name, vals in report.lexical.items()
    }
    lines += _table_block("Lexical diversity", lex_rows, report.corpora, sep)
    lines += _table_block("UPOS distribution (%)", report.upos, report.corpora, sep)
    lines += _table_block(
        "Dependency relations (%)", report.deprel, report.corpora, sep
    )
    if report.spans:
        lines += _table_block(
            "Constituent spans (%)", report.spans, report.corpora, sep
        )
    if report.emotions:
        lines += _table_block(
            "Emotions (%)", report.emotions, report.corpora, sep
        )

    gender_rows = {
        name: {
            "name": "gender", "unit": "ratio",
            "rows": [
                ("masc", float(vals["masc"])), ("fem", float(vals["fem"])),
                ("ratio", vals["ratio"]), ("diff_pct", vals["diff_pct"]),
            ],
        }
        for name, vals in report.gender.items()
    }
    lines += _table_block(
        "Pronoun gender (masc/fem)", gender_rows, report.corpora, sep
    )

    for metric, matrix in report.pvalues.items():
        labels = matrix["labels"]
        lines.append(
            ("## " if format == "markdown" else "# ")
            + f"P-values: {metric}"
        )
        if format == "markdown":
            lines.append("")
            lines.append("| | " + " | ".join(labels) + " |")
            lines.append("|" + "---|" * (len(labels) + 1))
        else:
            lines.append(sep.join([""] + labels))
        for i, row_label in enumerate(labels):
            cells = [_format_p(matrix["cells"][i][j]) for j in range(len(labels))]
            if format == "markdown":
                lines.append("| " + row_label + " | " + " | ".join(cells) + " |")
            else:
                lines.append(sep.join([row_label] + cells))
        lines.append("")

    return ("\n".join(lines) + "\n").encode("utf-8")


def _format_p(p: float) -> str:
    if p < 0.001:
        return "<0.001"
    return f"{p:.3f}"
