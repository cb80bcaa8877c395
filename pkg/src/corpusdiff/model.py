"""Domain types for annotated corpora.

A Corpus holds Documents, each a list of Sentences. Sentences carry the
dependency layer (tokens with head/deprel) and optionally a constituency
tree aligned by corpus order.
"""
from __future__ import annotations

from dataclasses import dataclass, field

UPOS_TAGS = (
    "NOUN", "PUNCT", "ADP", "VERB", "PROPN", "DET", "ADJ", "PRON", "AUX",
    "ADV", "CCONJ", "PART", "NUM", "SCONJ", "INTJ", "SYM", "X",
)


class CorpusError(Exception):
    """Malformed input data (parse failures, invariant violations)."""


@dataclass(frozen=True, slots=True)
class Token:
    index: int  # 1-based position in the sentence
    form: str
    lemma: str
    upos: str
    feats: dict[str, str]
    head: int  # 0 = root
    deprel: str


@dataclass(slots=True)
class ConstNode:
    """Node of a phrase-structure tree.

    Either an internal node (children non-empty, leaf is None) or a leaf
    holding a 1-based terminal index plus its word form.
    """
    label: str
    children: list["ConstNode"] = field(default_factory=list)
    leaf: int | None = None
    word: str | None = None

    @property
    def is_leaf(self) -> bool:
        return self.leaf is not None

    @property
    def is_preterminal(self) -> bool:
        return len(self.children) == 1 and self.children[0].is_leaf

    def leaves(self) -> list[int]:
        if self.is_leaf:
            return [self.leaf]
        out: list[int] = []
        for child in self.children:
            out.extend(child.leaves())
        return out


@dataclass(slots=True)
class Sentence:
    tokens: list[Token]
    const_tree: ConstNode | None = None
    doc_id: str = ""

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(slots=True)
class Document:
    doc_id: str
    sentences: list[Sentence]
    meta: dict[str, str] = field(default_factory=dict)


@dataclass(slots=True)
class Corpus:
    name: str
    documents: list[Document]

    def sentences(self) -> list[Sentence]:
        return [s for d in self.documents for s in d.sentences]

    def tokens(self):
        for doc in self.documents:
            for sent in doc.sentences:
                yield from sent.tokens


def validate(sentence: Sentence) -> str | None:
    """Check Sentence invariants; return None if ok, else a diagnostic."""
    n = len(sentence.tokens)
    if n == 0:
        return "empty sentence"
    for i, tok in enumerate(sentence.tokens, start=1):
        if tok.index != i:
            return f"token indices not contiguous at position {i}"
        if not 0 <= tok.head <= n:
            return f"head {tok.head} out of range at token {i}"
        if tok.head == tok.index:
            return f"self-loop at token {i}"
        if tok.upos not in UPOS_TAGS:
            return f"unknown UPOS tag {tok.upos!r} at token {i}"
    roots = [t.index for t in sentence.tokens if t.head == 0]
    if not roots:
        return "no root"
    if len(roots) > 1:
        return "multiple roots"
    # reachability from the root proves acyclicity for n-1 non-root edges
    children: dict[int, list[int]] = {}
    for tok in sentence.tokens:
        children.setdefault(tok.head, []).append(tok.index)
    seen = set()
    stack = [0]
    while stack:
        node = stack.pop()
        for child in children.get(node, ()):
            if child not in seen:
                seen.add(child)
                stack.append(child)
    if len(seen) != n:
        return "cycle"
    if sentence.const_tree is not None:
        leaves = sentence.const_tree.leaves()
        if leaves != list(range(1, len(leaves) + 1)):
            return "constituency leaves not a left-to-right cover"
    return None
