"""Command-line pipeline: ingest, generate, analyze, compare, render.

Exit codes: 0 success, 1 input error, 2 completion-endpoint failure.
A config file of key=value lines (parameter names with underscores)
supplies defaults for any flag; flags given on the command line win.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import report as report_mod
from .archive import (
    ArchiveError, DEFAULT_SEPARATOR, build_prompt, filter_articles,
    parse_archive_json, summarize_metadata,
)
from .brackets import parse_bracketed
from .conllu import parse_conllu
from .genclient import (
    CompletionClient, EndpointConfig, EndpointError, GenerationParams,
)
from .archive import Prompt
from .lexical import MetricError
from .model import CorpusError
from .semantic import LabelError, load_embeddings, load_emotion_labels

INPUT_ERRORS = (
    ArchiveError, CorpusError, MetricError, LabelError, ValueError, OSError,
    json.JSONDecodeError, KeyError,
)


def _load_config(ctx: click.Context, param: click.Parameter, value):
    if not value:
        return value
    defaults: dict[str, str] = {}
    for lineno, raw in enumerate(Path(value).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise click.BadParameter(f"line {lineno}: expected key=value")
        defaults[key.strip().replace("-", "_")] = val.strip()
    ctx.default_map = dict(ctx.default_map or {})
    ctx.default_map.update(defaults)
    return value


def _config_option():
    return click.option(
        "--config", callback=_load_config, expose_value=False,
        is_eager=True, type=click.Path(exists=True),
        help="key=value file with defaults for the flags below",
    )


def _open_in(path: str):
    if path == "-":
        return sys.stdin
    return open(path, "r", encoding="utf-8")


@click.group()
def main() -> None:
    """Quantitative comparison of annotated text corpora."""


@main.command()
@_config_option()
@click.argument("archives", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--records-out", type=click.Path(), help="JSONL of kept articles")
@click.option("--prompts-out", type=click.Path(), help="JSONL of prompts")
@click.option("--from", "date_from", default=None, help="keep articles on/after this date")
@click.option("--to", "date_to", default=None, help="keep articles on/before this date")
@click.option("--separator", default=DEFAULT_SEPARATOR, help="headline/lead joiner")
def ingest(archives, records_out, prompts_out, date_from, date_to, separator):
    """Parse archive JSON files into article records and prompts."""
    try:
        records = []
        for path in archives:
            records.extend(parse_archive_json(Path(path).read_bytes()))
        kept = filter_articles(records, date_from, date_to)
        sections, materials = summarize_metadata(kept) if kept else (None, None)
        if records_out:
            with open(records_out, "w", encoding="utf-8") as fh:
                for rec in kept:
                    fh.write(json.dumps({
                        "doc_id": rec.doc_id,
                        "headline": rec.headline,
                        "lead_paragraph": rec.lead_paragraph,
                        "section_name": rec.section_name,
                        "type_of_material": rec.type_of_material,
                        "pub_date": rec.pub_date,
                        "url": rec.url,
                    }, sort_keys=True) + "\n")
        if prompts_out:
            with open(prompts_out, "w", encoding="utf-8") as fh:
                for rec in kept:
                    prompt = build_prompt(rec, separator)
                    fh.write(json.dumps({
                        "doc_id": prompt.doc_id,
                        "text": prompt.text,
                        "short": prompt.short,
                    }, sort_keys=True) + "\n")
        click.echo(f"{len(records)} articles read, {len(kept)} kept")
        if sections is not None:
            for cat, val in sections.rows[:10]:
                click.echo(f"  section {cat or '(none)'}: {val:.2f}%")
            for cat, val in materials.rows[:10]:
                click.echo(f"  material {cat or '(none)'}: {val:.2f}%")
    except INPUT_ERRORS as exc:
        raise SystemExit(_fail(exc, 1))


@main.command()
@_config_option()
@click.option("--prompts", "prompts_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--endpoint", required=True, help="completion endpoint base URL")
@click.option("--model", default="", help="model name sent to the endpoint")
@click.option("--max-in-flight", default=4, show_default=True)
@click.option("--temperature", default=0.7, show_default=True)
@click.option("--top-p", default=0.9, show_default=True)
@click.option("--rep-penalty", default=1.1, show_default=True)
@click.option("--max-tokens", default=200, show_default=True)
def generate(prompts_path, out_path, endpoint, model, max_in_flight,
             temperature, top_p, rep_penalty, max_tokens):
    """Generate a machine corpus from prompts via the completion endpoint."""
    try:
        prompts = []
        with _open_in(prompts_path) as fh:
            for line in fh:
                if line.strip():
                    rec = json.loads(line)
                    prompts.append(Prompt(
                        doc_id=rec["doc_id"], text=rec["text"],
                        short=bool(rec.get("short", False)),
                    ))
        params = GenerationParams(
            temperature=temperature, top_p=top_p,
            repetition_penalty=rep_penalty, max_new_tokens=max_tokens,
        )
        client = CompletionClient(EndpointConfig(base_url=endpoint, model=model))
    except INPUT_ERRORS as exc:
        raise SystemExit(_fail(exc, 1))
    try:
        outcomes = client.generate_corpus(prompts, params, max_in_flight)
    except EndpointError as exc:
        raise SystemExit(_fail(exc, 2))
    failures = 0
    with open(out_path, "w", encoding="utf-8") as fh:
        for outcome in outcomes:
            if outcome.doc is not None:
                fh.write(json.dumps(outcome.doc.to_dict(), sort_keys=True) + "\n")
            else:
                failures += 1
                fh.write(json.dumps({
                    "doc_id": outcome.doc_id, "error": outcome.error,
                }, sort_keys=True) + "\n")
    click.echo(f"{len(outcomes) - failures} generated, {failures} failed")


@main.command()
@_config_option()
@click.option("--conllu", "conllu_path", required=True,
              help="CoNLL-U file, or - for stdin")
@click.option("--trees", "trees_path", default=None, type=click.Path(exists=True),
              help="bracketed trees, one per line, aligned by corpus order")
@click.option("--emotions", "emotions_path", default=None, type=click.Path(exists=True))
@click.option("--embeddings", "embeddings_path", default=None, type=click.Path(exists=True))
@click.option("--name", default="corpus")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--segment-size", default=1000, show_default=True)
@click.option("--mtld-threshold", default=0.72, show_default=True)
@click.option("--exclude-punct", is_flag=True, default=False)
@click.option("--no-partial-factor", is_flag=True, default=False)
def analyze(conllu_path, trees_path, emotions_path, embeddings_path, name,
            out_path, segment_size, mtld_threshold, exclude_punct,
            no_partial_factor):
    """Run every metric over one corpus, writing an analysis bundle."""
    try:
        with _open_in(conllu_path) as fh:
            corpus = parse_conllu(fh, name=name)
        if trees_path:
            with open(trees_path, encoding="utf-8") as fh:
                trees = parse_bracketed(fh)
            sentences = corpus.sentences()
            if len(trees) != len(sentences):
                click.echo(
                    f"warning: {len(trees)} trees for {len(sentences)} "
                    "sentences; pairing by order up to the shorter",
                    err=True,
                )
            for sent, tree in zip(sentences, trees):
                if len(tree.leaves()) != len(sent.tokens):
                    click.echo(
                        f"warning: tree with {len(tree.leaves())} leaves "
                        f"paired with {len(sent.tokens)}-token sentence",
                        err=True,
                    )
                sent.const_tree = tree
        emotions = None
        if emotions_path:
            with open(emotions_path, encoding="utf-8") as fh:
                emotions = load_emotion_labels(fh)
        embeddings = None
        if embeddings_path:
            with open(embeddings_path, encoding="utf-8") as fh:
                embeddings = load_embeddings(fh)
        options = report_mod.AnalyzeOptions(
            segment_size=segment_size,
            mtld_threshold=mtld_threshold,
            exclude_punct=exclude_punct,
            partial_factor=not no_partial_factor,
        )
        bundle = report_mod.analyze(corpus, emotions, embeddings, options)
        Path(out_path).write_text(
            json.dumps(bundle.to_dict(), sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
        )
        click.echo(
            f"{bundle.sentence_count} sentences, {bundle.token_count} tokens "
            f"-> {out_path}"
        )
    except INPUT_ERRORS as exc:
        raise SystemExit(_fail(exc, 1))


@main.command()
@_config_option()
@click.option("--reference", "reference_path", required=True,
              type=click.Path(exists=True), help="reference analysis bundle")
@click.argument("models", nargs=-1, required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--min-ref-pct", default=1.0, show_default=True,
              help="reference-frequency filter for deprel/span tables")
def compare(reference_path, models, out_path, min_ref_pct):
    """Compare one reference bundle against model bundles."""
    try:
        ref = report_mod.AnalysisBundle.from_dict(
            json.loads(Path(reference_path).read_text())
        )
        model_bundles = [
            report_mod.AnalysisBundle.from_dict(json.loads(Path(p).read_text()))
            for p in models
        ]
        result = report_mod.compare(ref, model_bundles, min_ref_pct)
        Path(out_path).write_bytes(report_mod.render(result, "json"))
        click.echo(f"compared {ref.name} vs {len(model_bundles)} model(s)")
    except INPUT_ERRORS as exc:
        raise SystemExit(_fail(exc, 1))


@main.command()
@_config_option()
@click.option("--report", "report_path", required=True, type=click.Path(exists=True))
@click.option("--format", "fmt", default="markdown", show_default=True,
              type=click.Choice(report_mod.RENDER_FORMATS))
@click.option("--out", "out_path", default=None, type=click.Path())
def render(report_path, fmt, out_path):
    """Render a comparison report as markdown, TSV, or JSON."""
    try:
        data = json.loads(Path(report_path).read_text())
        rep = report_mod.ComparisonReport.from_dict(data)
        payload = report_mod.render(rep, fmt)
        if out_path:
            Path(out_path).write_bytes(payload)
        else:
            sys.stdout.buffer.write(payload)
    except INPUT_ERRORS as exc:
        raise SystemExit(_fail(exc, 1))


def _fail(exc: Exception, code: int) -> int:
    click.echo(f"error: {exc}", err=True)
    return code


if __name__ == "__main__":
    main()
