"""Penn-Treebank-style bracketed tree reader, one tree per line.

Leaf indices are assigned by left-to-right terminal order, starting at 1.
An unlabeled or TOP/ROOT wrapper with a single child is unwrapped so the
stored root is the topmost labeled constituent.
"""
from __future__ import annotations

from typing import IO, Iterable

from .model import ConstNode, CorpusError

_WRAPPER_LABELS = {"", "TOP", "ROOT"}


def parse_bracketed_line(line: str) -> ConstNode:
    """Parse a single S-expression tree."""
    pos = 0
    n = len(line)
    counter = [0]

    def skip_ws() -> None:
        nonlocal pos
        while pos < n and line[pos].isspace():
            pos += 1

    def read_atom() -> str:
        nonlocal pos
        start = pos
        while pos < n and not line[pos].isspace() and line[pos] not in "()":
            pos += 1
        return line[start:pos]

    def read_node() -> ConstNode:
        nonlocal pos
        if line[pos] != "(":
            raise CorpusError(f"expected '(' at column {pos + 1}")
        pos += 1
        skip_ws()
        label = read_atom()
        skip_ws()
        children: list[ConstNode] = []
        while True:
            if pos >= n:
                raise CorpusError(f"unbalanced parentheses at column {n}")
            if line[pos] == ")":
                pos += 1
                break
            if line[pos] == "(":
                children.append(read_node())
            else:
                word = read_atom()
                counter[0] += 1
                children.append(
                    ConstNode(label="", leaf=counter[0], word=word)
                )
            skip_ws()
        if not children:
            raise CorpusError(f"empty node label or body at column {pos}")
        if not label and not (len(children) == 1 and not children[0].is_leaf):
            raise CorpusError(f"empty node label at column {pos}")
        return ConstNode(label=label, children=children)

    skip_ws()
    if pos >= n or line[pos] != "(":
        raise CorpusError("expected '(' at column 1")
    root = read_node()
    skip_ws()
    if pos != n:
        raise CorpusError(f"trailing input at column {pos + 1}")
    while root.label in _WRAPPER_LABELS and len(root.children) == 1 \
            and not root.children[0].is_leaf:
        root = root.children[0]
    return root


def parse_bracketed(stream: IO[str] | Iterable[str]) -> list[ConstNode]:
    """Parse one tree per non-blank line."""
    trees: list[ConstNode] = []
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            trees.append(parse_bracketed_line(line))
        except CorpusError as exc:
            raise CorpusError(f"line {lineno}: {exc}") from None
    return trees


def serialize_bracketed(node: ConstNode) -> str:
    if node.is_leaf:
        return node.word or ""
    inner = " ".join(serialize_bracketed(c) for c in node.children)
    return f"({node.label} {inner})"
