"""CoNLL-U reader and writer.

Reads the 10-column tab-separated format. Multiword-token range lines
("3-4") and empty-node lines ("5.1") are skipped: all metrics are defined
over the basic token sequence. `# newdoc id = ...` comments start a new
document.
"""
from __future__ import annotations

from typing import IO, Iterable

from .model import Corpus, CorpusError, Document, Sentence, Token, validate

N_COLUMNS = 10


def parse_feats(feats: str) -> dict[str, str]:
    """Split "Gender=Masc|Number=Sing" into a map; "_" means no features."""
    if feats in ("_", ""):
        return {}
    out: dict[str, str] = {}
    for item in feats.split("|"):
        key, _, value = item.partition("=")
        if key:
            out[key] = value
    return out


def format_feats(feats: dict[str, str]) -> str:
    if not feats:
        return "_"
    return "|".join(f"{k}={v}" for k, v in sorted(feats.items()))


def parse_conllu(stream: IO[str] | Iterable[str], name: str = "") -> Corpus:
    """Parse a CoNLL-U stream into a Corpus.

    Raises CorpusError for malformed token lines or ill-formed head
    structures, reporting the sentence ordinal and offending token.
    """
    documents: list[Document] = []
    current_doc: Document | None = None
    tokens: list[Token] = []
    sent_ordinal = 0
    sent_doc_id = ""

    def flush() -> None:
        nonlocal tokens, current_doc, sent_ordinal
        if not tokens:
            return
        sent_ordinal += 1
        sentence = Sentence(tokens=tokens, doc_id=sent_doc_id)
        diagnostic = validate(sentence)
        if diagnostic is not None:
            raise CorpusError(f"sentence {sent_ordinal}: {diagnostic}")
        if current_doc is None:
            current_doc = Document(doc_id=sent_doc_id or name or "doc", sentences=[])
        current_doc.sentences.append(sentence)
        tokens = []

    for raw in stream:
        line = raw.rstrip("\n")
        if not line.strip():
            flush()
            continue
        if line.startswith("#"):
            comment = line[1:].strip()
            key, _, value = comment.partition("=")
            if key.strip() == "newdoc id":
                flush()
                if current_doc is not None:
                    documents.append(current_doc)
                sent_doc_id = value.strip()
                current_doc = Document(doc_id=sent_doc_id, sentences=[])
            continue
        cols = line.split("\t")
        if len(cols) != N_COLUMNS:
            raise CorpusError(
                f"sentence {sent_ordinal + 1}: expected {N_COLUMNS} columns, "
                f"got {len(cols)}: {line!r}"
            )
        tok_id = cols[0]
        if "-" in tok_id or "." in tok_id:
            continue  # multiword range / empty node: excluded from metrics
        try:
            index = int(tok_id)
        except ValueError:
            raise CorpusError(
                f"sentence {sent_ordinal + 1}: non-integer token id {tok_id!r}"
            ) from None
        try:
            head = int(cols[6])
        except ValueError:
            raise CorpusError(
                f"sentence {sent_ordinal + 1}: non-integer head {cols[6]!r} "
                f"at token {index}"
            ) from None
        tokens.append(
            Token(
                index=index,
                form=cols[1],
                lemma=cols[2],
                upos=cols[3],
                feats=parse_feats(cols[5]),
                head=head,
                deprel=cols[7],
            )
        )
    flush()
    if current_doc is not None:
        documents.append(current_doc)
    return Corpus(name=name, documents=documents)


def serialize_conllu(corpus: Corpus) -> str:
    """Write a Corpus back to CoNLL-U text (metric-relevant fields only)."""
    lines: list[str] = []
    for doc in corpus.documents:
        lines.append(f"# newdoc id = {doc.doc_id}")
        for sent in doc.sentences:
            for tok in sent.tokens:
                lines.append(
                    "\t".join(
                        (
                            str(tok.index),
                            tok.form,
                            tok.lemma,
                            tok.upos,
                            "_",
                            format_feats(tok.feats),
                            str(tok.head),
                            tok.deprel,
                            "_",
                            "_",
                        )
                    )
                )
            lines.append("")
    return "\n".join(lines) + "\n"
