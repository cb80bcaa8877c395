"""Arc statistics and the dependency-length optimality score.

The optimality score places the observed sum of dependency lengths D
between the expectation under a uniformly random word order,
D_rand = (n^2 - 1)/3, and the minimum D_min achievable for the
sentence's tree shape: score = (D_rand - D) / (D_rand - D_min).
1 at the optimum, 0 expected at random, negative when worse than chance.

D_min comes from an exact divide-and-conquer solver for minimum linear
arrangement of free trees, built on two mutually recursive problems.
The free problem splits the tree at an edge into two anchored halves
facing each other. The anchored problem (more generally, a tree whose
root is pulled toward one end by d pending edges) peels a largest
subtree of the root off to either extreme end as a contiguous,
inward-anchored block; peeling toward the pending edges leaves d+1 of
them, peeling away leaves d-1, and at d = 0 the position of the root no
longer matters and the remainder is re-solved as a free problem. That
last re-rooting step is what makes the decomposition exact: fixing the
root's block between its subtrees, as the naive layout does, is not
always optimal.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from math import floor, sqrt

from .lexical import MetricError
from .model import Corpus, Sentence

DEFAULT_BINS: tuple[tuple[int, int | None], ...] = (
    (1, 10), (11, 20), (21, 30), (31, 40), (41, None),
)


@dataclass(frozen=True, slots=True)
class Arc:
    dependent: int
    head: int
    length: int
    direction: str  # "L" dependent precedes head, "R" dependent follows

    @classmethod
    def from_pair(cls, dependent: int, head: int) -> "Arc":
        return cls(
            dependent=dependent,
            head=head,
            length=abs(dependent - head),
            direction="R" if dependent > head else "L",
        )


@dataclass(slots=True)
class OmegaResult:
    n: int
    d_sum: int
    d_random: Fraction
    d_min: int
    omega: float
    witness: list[int]  # 1-based token indices in optimal order


@dataclass(slots=True)
class BinStats:
    lo: int
    hi: int | None
    pct_left: float
    pct_right: float
    mean_len: float
    mean_len_left: float | None
    mean_len_right: float | None
    sd_len: float
    sd_len_left: float | None
    sd_len_right: float | None
    arc_count: int
    sentence_count: int


def arcs(sentence: Sentence) -> list[Arc]:
    """One arc per non-root token; the root arc has no surface length."""
    return [
        Arc.from_pair(tok.index, tok.head)
        for tok in sentence.tokens
        if tok.head >= 1
    ]


def sum_dep_lengths(sentence: Sentence) -> int:
    return sum(a.length for a in arcs(sentence))


def expected_random_D(n: int) -> Fraction:
    """Mean of D over all n! orders of any tree on n nodes, exactly."""
    if n < 2:
        raise MetricError(f"random-arrangement expectation undefined for n={n}")
    return Fraction(n * n - 1, 3)


def _pstats(lengths: list[int]) -> tuple[float | None, float | None]:
    if not lengths:
        return None, None
    mean = sum(lengths) / len(lengths)
    sd = sqrt(sum((x - mean) ** 2 for x in lengths) / len(lengths))
    return mean, sd


def bin_of(n: int, bins=DEFAULT_BINS) -> int | None:
    for i, (lo, hi) in enumerate(bins):
        if n >= lo and (hi is None or n <= hi):
            return i
    return None


def binned_arc_stats(corpus: Corpus, bins=DEFAULT_BINS) -> list[BinStats]:
    """Arc direction/length statistics pooled per sentence-length bin."""
    pooled: dict[int, list[Arc]] = defaultdict(list)
    sent_counts: Counter = Counter()
    for sent in corpus.sentences():
        idx = bin_of(len(sent), bins)
        if idx is None:
            continue
        pooled[idx].extend(arcs(sent))
        sent_counts[idx] += 1
    out: list[BinStats] = []
    for idx, (lo, hi) in enumerate(bins):
        arcs_here = pooled.get(idx)
        if not arcs_here:
            continue
        lengths = [a.length for a in arcs_here]
        left = [a.length for a in arcs_here if a.direction == "L"]
        right = [a.length for a in arcs_here if a.direction == "R"]
        mean, sd = _pstats(lengths)
        mean_l, sd_l = _pstats(left)
        mean_r, sd_r = _pstats(right)
        out.append(
            BinStats(
                lo=lo,
                hi=hi,
                pct_left=100.0 * len(left) / len(arcs_here),
                pct_right=100.0 * len(right) / len(arcs_here),
                mean_len=mean,
                mean_len_left=mean_l,
                mean_len_right=mean_r,
                sd_len=sd,
                sd_len_left=sd_l,
                sd_len_right=sd_r,
                arc_count=len(arcs_here),
                sentence_count=sent_counts[idx],
            )
        )
    return out


# ---------------------------------------------------------------------------
# Minimum linear arrangement of free trees
# ---------------------------------------------------------------------------

class TreeInputError(ValueError):
    """Input to the arrangement solver is not a free tree."""


def _check_tree(n: int, edges: list[tuple[int, int]]) -> list[list[int]]:
    if n < 1:
        raise TreeInputError("tree must have at least one node")
    if len(edges) != n - 1:
        raise TreeInputError(f"{len(edges)} edges for {n} nodes is not a tree")
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise TreeInputError(f"bad edge ({u}, {v})")
        adj[u].append(v)
        adj[v].append(u)
    seen = [False] * n
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if not seen[y]:
                seen[y] = True
                count += 1
                stack.append(y)
    if count != n:
        raise TreeInputError("graph is disconnected or cyclic")
    return adj


class _TreeSolver:
    """Shared state for the free/pulled mutual recursion.

    Vertex subsets are bitmasks, so memo keys stay cheap for trees of any
    size. Layouts are returned with the pulled side on the right.
    """

    def __init__(self, n: int, adj: list[list[int]]):
        self.n = n
        self.adj = adj
        self._free: dict[int, tuple[int, list[int]]] = {}
        self._pulled: dict[tuple[int, int, int], tuple[int, list[int]]] = {}

    def _shape(self, v: int, verts: int, parent: int) -> tuple:
        """Canonical form of the rooted subtree at v (AHU encoding)."""
        children = sorted(
            self._shape(c, verts, v)
            for c in self.adj[v]
            if c != parent and verts >> c & 1
        )
        return tuple(children)

    def _component(self, start: int, verts: int, banned: int) -> int:
        """Bitmask of the component of `start` inside `verts` avoiding `banned`."""
        seen = 1 << start
        stack = [start]
        while stack:
            x = stack.pop()
            for y in self.adj[x]:
                bit = 1 << y
                if y != banned and (verts & bit) and not (seen & bit):
                    seen |= bit
                    stack.append(y)
        return seen

    def _centroids(self, verts: int) -> list[int]:
        """The one or two vertices whose largest hanging component is <= m/2."""
        m = verts.bit_count()
        start = verts.bit_length() - 1
        parent = {start: -1}
        order = [start]
        for x in order:
            for y in self.adj[x]:
                if verts >> y & 1 and y not in parent:
                    parent[y] = x
                    order.append(y)
        size = dict.fromkeys(order, 1)
        heaviest = dict.fromkeys(order, 0)
        for x in reversed(order[1:]):
            p = parent[x]
            size[p] += size[x]
            heaviest[p] = max(heaviest[p], size[x])
        return [
            v for v in order if max(heaviest[v], m - size[v]) <= m // 2
        ]

    def free(self, verts: int) -> tuple[int, list[int]]:
        """Minimum arrangement of the subtree induced by `verts`.

        Some optimum splits the tree at an edge incident to a centroid
        into two contiguous halves, each anchored toward the other;
        minimize over those edges. Splits whose far sides are tied in
        shape are interchangeable, so each shape is tried once.
        """
        cached = self._free.get(verts)
        if cached is not None:
            return cached
        if verts & (verts - 1) == 0:
            result = (0, [verts.bit_length() - 1])
        else:
            best: tuple[int, list[int]] | None = None
            for c in self._centroids(verts):
                shapes_seen = set()
                for u in self.adj[c]:
                    if not (verts >> u & 1):
                        continue
                    side = self._component(u, verts, c)
                    shape = self._shape(u, side, c)
                    if shape in shapes_seen:
                        continue
                    shapes_seen.add(shape)
                    cost_u, lay_u = self.pulled(1, u, side)
                    cost_c, lay_c = self.pulled(1, c, verts ^ side)
                    cost = cost_u + cost_c + 1
                    if best is None or cost < best[0]:
                        best = (cost, lay_u + lay_c[::-1])
            result = best
        self._free[verts] = result
        return result

    def pulled(self, d: int, root: int, verts: int) -> tuple[int, list[int]]:
        """Minimum of (internal cost + d * distance of root from the right end).

        d counts edges that leave the block past its right boundary (for
        d = 1 this is the classic anchored problem, up to the constant
        +1 step across the boundary). Some optimum peels a largest
        subtree of the root to one extreme end as an inward-anchored
        block: peeled rightward it is crossed by all d pending edges and
        its own edge joins them; peeled leftward its edge instead
        cancels one pending edge, and when d hits 0 the root's position
        is free, so the remainder reduces to the free problem.
        """
        if verts == 1 << root:
            return 0, [root]
        if d == 0:
            return self.free(verts)
        key = (d, root, verts)
        cached = self._pulled.get(key)
        if cached is not None:
            return cached
        rest = verts & ~(1 << root)
        subtrees = []
        for c in self.adj[root]:
            if rest >> c & 1:
                block = self._component(c, rest, root)
                subtrees.append((block.bit_count(), c, block))
        largest = max(t for t, _, _ in subtrees)
        m = verts.bit_count()
        # tied largest subtrees with the same shape are interchangeable;
        # peeling one of each shape suffices and keeps stars polynomial
        candidates = []
        shapes_seen = set()
        for t, c, block in subtrees:
            if t != largest:
                continue
            shape = self._shape(c, block, root)
            if shape in shapes_seen:
                continue
            shapes_seen.add(shape)
            candidates.append((t, c, block))
        best: tuple[int, list[int]] | None = None
        for t, c, block in candidates:
            anchor_cost, anchor_lay = self.pulled(1, c, block)
            attach = anchor_cost + 1  # block internals + step to its neighbor
            cost_rest, lay_rest = self.pulled(d - 1, root, verts ^ block)
            cost = attach + (m - t - 1) + cost_rest
            if best is None or cost < best[0]:
                best = (cost, anchor_lay + lay_rest)
            cost_rest, lay_rest = self.pulled(d + 1, root, verts ^ block)
            cost = attach + d * t + cost_rest
            if cost < best[0]:
                best = (cost, lay_rest + anchor_lay[::-1])
        self._pulled[key] = best
        return best


def min_linear_arrangement(
    n: int, edges: list[tuple[int, int]]
) -> tuple[int, list[int]]:
    """Exact minimum linear arrangement of a free tree.

    Returns (d_min, order) where order[pos] is the node at position pos
    and d_min = sum over edges of |pos(u) - pos(v)|.
    """
    adj = _check_tree(n, edges)
    if n == 1:
        return 0, [0]
    best_cost, arrangement = _TreeSolver(n, adj).free((1 << n) - 1)
    pos = {node: i for i, node in enumerate(arrangement)}
    achieved = sum(abs(pos[u] - pos[v]) for u, v in edges)
    assert achieved == best_cost, "witness does not match computed minimum"
    return best_cost, arrangement


def free_tree_of(sentence: Sentence) -> tuple[int, list[tuple[int, int]]]:
    """Dependency tree with the root arc removed, nodes 0..n-1."""
    n = len(sentence.tokens)
    edges = [
        (tok.index - 1, tok.head - 1)
        for tok in sentence.tokens
        if tok.head >= 1
    ]
    return n, edges


def omega(sentence: Sentence) -> OmegaResult:
    """Dependency-length optimality of one sentence; requires n >= 3."""
    n = len(sentence.tokens)
    if n <= 2:
        raise MetricError(
            f"optimality score undefined for sentences of {n} token(s)"
        )
    d_sum = sum_dep_lengths(sentence)
    nodes, edges = free_tree_of(sentence)
    d_min, witness = min_linear_arrangement(nodes, edges)
    d_random = expected_random_D(n)
    score = float(
        (d_random - d_sum) / (d_random - Fraction(d_min))
    )
    return OmegaResult(
        n=n,
        d_sum=d_sum,
        d_random=d_random,
        d_min=d_min,
        omega=score,
        witness=[v + 1 for v in witness],
    )


@dataclass(slots=True)
class OmegaHistogram:
    bin_width: float
    bins: dict[float, int]   # bin start -> count
    skipped: int
    values: list[float]


def omega_distribution(corpus: Corpus, bin_width: float = 0.05) -> OmegaHistogram:
    """Histogram of per-sentence optimality scores over eligible sentences."""
    values: list[float] = []
    skipped = 0
    for sent in corpus.sentences():
        if len(sent) <= 2:
            skipped += 1
            continue
        values.append(omega(sent).omega)
    bins: Counter = Counter()
    for v in values:
        bins[round(floor(v / bin_width) * bin_width, 10)] += 1
    return OmegaHistogram(
        bin_width=bin_width,
        bins=dict(sorted(bins.items())),
        skipped=skipped,
        values=values,
    )
