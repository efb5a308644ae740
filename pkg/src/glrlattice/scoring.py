"""Normalized acoustic + bigram scores on links and forest nodes.

A word sequence ``w`` is scored as::

    lam * ngram_sum / ngram_ops + acoustic_sum / frames

where ``ngram_ops`` counts applied bigrams (the begin-marker bigram included)
and ``frames`` the time units spanned.  Because the score is a ratio, the
best continuation of a prefix cannot be chosen from one scalar per link.
Scores are therefore carried as raw sums ("denormalized") and compared
only once the denominators are fixed:

* every sequence under a node, or ending at a vertex, spans the same
  frames, so the acoustic denominator is fixed there;
* sequences are bucketed by boundary words and bigram count, so the
  junction bigrams and the final ``ngram_ops`` depend on the bucket only.

Within a bucket an entry is kept unless another one is at least as good in
both the acoustic and the n-gram sum (a Pareto front), which makes every
maximization exact.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, replace
from typing import Callable, Iterable

from .gss import GssState, Link, Node, ShiftAction, Vertex
from .lattice import BEGIN_MARKER, BigramModel

EMPTY_WORD = ""


@dataclass(frozen=True)
class ScoringConfig:
    lam: float = 1.0
    strict_bigram: bool = False

    def __post_init__(self):
        if not self.lam >= 0:
            raise ValueError("lambda must be nonnegative")


@dataclass(frozen=True)
class ScoreComponents:
    acoustic_sum: float = 0.0
    frames: int = 0
    ngram_sum: float = 0.0
    ngram_ops: int = 0

    def __add__(self, other: "ScoreComponents") -> "ScoreComponents":
        return ScoreComponents(
            self.acoustic_sum + other.acoustic_sum,
            self.frames + other.frames,
            self.ngram_sum + other.ngram_sum,
            self.ngram_ops + other.ngram_ops,
        )


ZERO = ScoreComponents()


def _lam(cfg) -> float:
    return cfg.lam if hasattr(cfg, "lam") else float(cfg)


def normalize_components(c: ScoreComponents, cfg) -> float:
    """Combined normalized log score of a nonempty sequence.

    ``cfg`` is a :class:`ScoringConfig` or a bare lambda.  With no bigram
    applied yet (a single word inside a node) the n-gram term is 0.
    """
    if c.frames <= 0:
        raise ValueError("normalization needs at least one frame")
    ngram = c.ngram_sum / c.ngram_ops if c.ngram_ops else 0.0
    return _lam(cfg) * ngram + c.acoustic_sum / c.frames


def normalized_parts(c: ScoreComponents) -> tuple[float, float]:
    """Per-frame acoustic and per-bigram n-gram averages of ``c``."""
    if c.frames <= 0:
        raise ValueError("normalization needs at least one frame")
    return c.acoustic_sum / c.frames, (c.ngram_sum / c.ngram_ops if c.ngram_ops else 0.0)


def denormalize(parts: tuple[float, float], frames: int, ngram_ops: int) -> ScoreComponents:
    """Undo the length normalization of :func:`normalized_parts`."""
    acoustic, ngram = parts
    return ScoreComponents(acoustic * frames, frames, ngram * ngram_ops, ngram_ops)


@dataclass(frozen=True)
class BoundaryEntry:
    first_word: str
    last_word: str
    components: ScoreComponents
    tree: str | None = None

    @property
    def is_empty(self) -> bool:
        return self.first_word == EMPTY_WORD

    @property
    def bucket(self) -> tuple[str, str, int]:
        return (self.first_word, self.last_word, self.components.ngram_ops)


EMPTY_ENTRY = BoundaryEntry(EMPTY_WORD, EMPTY_WORD, ZERO)


def inside_of(entry: BoundaryEntry | None, cfg) -> float:
    if entry is None or entry.components.frames == 0:
        return 0.0
    return normalize_components(entry.components, cfg)


def join(left: BoundaryEntry, right: BoundaryEntry, bigram: BigramModel, sep: str = " ") -> BoundaryEntry:
    """Concatenate two adjacent word sequences, applying the junction bigram."""
    if right.is_empty:
        if left.tree is None:
            return left
        return replace(left, tree=_join_trees(left.tree, right.tree, sep))
    if left.is_empty:
        if right.tree is None:
            return right
        return replace(right, tree=_join_trees(left.tree, right.tree, sep))
    lc, rc = left.components, right.components
    comps = ScoreComponents(
        lc.acoustic_sum + rc.acoustic_sum,
        lc.frames + rc.frames,
        lc.ngram_sum + rc.ngram_sum + bigram.logprob(left.last_word, right.first_word),
        lc.ngram_ops + rc.ngram_ops + 1,
    )
    tree = None if left.tree is None else _join_trees(left.tree, right.tree, sep)
    return BoundaryEntry(left.first_word, right.last_word, comps, tree)


def _join_trees(a: str | None, b: str | None, sep: str) -> str | None:
    if a is None or b is None:
        return None
    if not a:
        return b
    return a + sep + b if b else a


def combine_children(seq: Iterable[BoundaryEntry], bigram: BigramModel) -> BoundaryEntry:
    acc = EMPTY_ENTRY
    for child in seq:
        acc = join(acc, child, bigram)
    return acc


class Front:
    """Pareto-optimal entries per (first word, last word, bigram count) bucket.

    With ``lam == 0`` the n-gram sum is irrelevant and only the acoustic
    sum is compared.  Entries that tie keep the smaller tree string.
    """

    __slots__ = ("cells", "use_ngram")

    def __init__(self, lam: float):
        self.cells: dict[tuple[str, str, int], list[BoundaryEntry]] = {}
        self.use_ngram = lam != 0

    def add(self, e: BoundaryEntry) -> bool:
        cell = self.cells.setdefault(e.bucket, [])
        ea, en = e.components.acoustic_sum, e.components.ngram_sum
        ng = self.use_ngram
        for i, f in enumerate(cell):
            fa, fn = f.components.acoustic_sum, f.components.ngram_sum
            if fa >= ea and (not ng or fn >= en):
                if fa == ea and (not ng or fn == en) and e.tree is not None and e.tree < f.tree:
                    cell[i] = e
                    return True
                return False
        cell[:] = [
            f
            for f in cell
            if not (ea >= f.components.acoustic_sum and (not ng or en >= f.components.ngram_sum))
        ]
        cell.append(e)
        return True

    def __iter__(self):
        for cell in self.cells.values():
            yield from cell

    def __len__(self) -> int:
        return sum(len(c) for c in self.cells.values())


def entry_value(e: BoundaryEntry, cfg) -> float:
    return inside_of(e, cfg)


def front_value(front: Iterable[BoundaryEntry], cfg) -> float:
    return max((entry_value(e, cfg) for e in front), default=-math.inf)


@dataclass
class LinkScore:
    inside: Front
    outside: Front
    lam: float

    @property
    def inside_value(self) -> float:
        return front_value(self.inside, self.lam)

    @property
    def outside_value(self) -> float:
        return front_value(self.outside, self.lam)


class Scorer:
    """Lazily evaluated inside fronts of nodes and outside fronts of links.

    Attach it to a :class:`GssState` to keep its caches coherent while the
    stack grows; values are recomputed on demand after invalidation.
    """

    def __init__(self, bigram: BigramModel, cfg: ScoringConfig | float = 1.0, trees: bool = False):
        self.bigram = bigram
        self.lam = _lam(cfg)
        self.trees = trees
        self.node_cache: dict[Node, Front] = {}
        self.link_cache: dict[Link, Front] = {}
        self.ctx_cache: dict[Vertex, Front] = {}
        self._depth: dict[object, int] = {}
        self._low = math.inf
        self._begin = BoundaryEntry(BEGIN_MARKER, BEGIN_MARKER, ZERO, "" if trees else None)

    # -- cache coherence ---------------------------------------------------

    def attach(self, state: GssState) -> "Scorer":
        state.listeners.append(self._on_change)
        return self

    def _on_change(self, kind: str, obj) -> None:
        if kind == "node":
            self._invalidate(nodes=[obj])
        elif kind == "link":
            self._invalidate(links=[obj])
        else:
            self._invalidate(vertices=[obj])

    def _invalidate(self, nodes=(), links=(), vertices=()) -> None:
        # A cached value implies cached inputs, so propagation stops at misses.
        nodes, links, vertices = list(nodes), list(links), list(vertices)
        while nodes or links or vertices:
            if nodes:
                n = nodes.pop()
                if self.node_cache.pop(n, None) is not None:
                    nodes.extend(n.parents)
                    links.extend(n.links)
            elif links:
                link = links.pop()
                if self.link_cache.pop(link, None) is not None and link.owner is not None:
                    vertices.append(link.owner)
            else:
                v = vertices.pop()
                if self.ctx_cache.pop(v, None) is not None:
                    links.extend(v.succ_links)

    def _memo(self, cache: dict, obj, compute: Callable[[object], Front]) -> Front:
        hit = cache.get(obj)
        if hit is not None:
            return hit
        depth = self._depth.get(obj)
        if depth is not None:
            # cyclic (epsilon or unit) derivation: contributes nothing new
            self._low = min(self._low, depth)
            return Front(self.lam)
        d = len(self._depth)
        self._depth[obj] = d
        low0, self._low = self._low, math.inf
        try:
            value = compute(obj)
        finally:
            del self._depth[obj]
        if self._low >= d:
            cache[obj] = value
            low = math.inf
        else:
            low = self._low
        self._low = min(low0, low)
        return value

    # -- inside ------------------------------------------------------------

    def node_front(self, node: Node) -> Front:
        return self._memo(self.node_cache, node, self._compute_node)

    def _compute_node(self, node: Node) -> Front:
        front = Front(self.lam)
        name = node.cat.name
        if node.is_terminal:
            for h in node.hypotheses:
                comps = ScoreComponents(h.acoustic_logp, h.frames, 0.0, 0)
                tree = f"({name} {h.key})" if self.trees else None
                front.add(BoundaryEntry(h.key, h.key, comps, tree))
            return front
        start = EMPTY_ENTRY if not self.trees else replace(EMPTY_ENTRY, tree="")
        for seq in node.seqs:
            partial = [start]
            for child in seq:
                step = Front(self.lam)
                child_front = self.node_front(child)
                for p in partial:
                    for c in child_front:
                        step.add(join(p, c, self.bigram))
                partial = list(step)
                if not partial:
                    break
            for p in partial:
                if self.trees:
                    p = replace(p, tree=f"({name} {p.tree})" if p.tree else f"({name})")
                front.add(p)
        return front

    # -- outside -----------------------------------------------------------

    def vertex_context(self, v: Vertex) -> Front:
        """Best left contexts ending at ``v``; the begin marker if ``v`` has no links."""
        return self._memo(self.ctx_cache, v, self._compute_context)

    def _compute_context(self, v: Vertex) -> Front:
        front = Front(self.lam)
        if not v.links:
            front.add(self._begin)
            return front
        for link in list(v.links.values()):
            for e in self.link_outside(link):
                front.add(e)
        return front

    def link_outside(self, link: Link) -> Front:
        return self._memo(self.link_cache, link, self._compute_link)

    def _compute_link(self, link: Link) -> Front:
        front = Front(self.lam)
        inside = self.node_front(link.node)
        for pred in list(link.preds):
            for e in self.vertex_context(pred):
                for i in inside:
                    front.add(join(e, i, self.bigram))
        return front

    def link_score(self, link: Link) -> LinkScore:
        return LinkScore(self.node_front(link.node), self.link_outside(link), self.lam)

    def outside_value(self, link: Link) -> float:
        return front_value(self.link_outside(link), self.lam)

    def shift_score(self, action: ShiftAction) -> float:
        """Outside evaluation of the link a Shift would create or extend."""
        ctx = self.vertex_context(action.vertex)
        inside = self.node_front(action.node)
        best = -math.inf
        for e in ctx:
            for i in inside:
                v = entry_value(join(e, i, self.bigram), self.lam)
                if v > best:
                    best = v
        return best


def outside_of(link: Link, cfg, bigram: BigramModel) -> float:
    return Scorer(bigram, cfg).outside_value(link)


@dataclass(frozen=True)
class BestTree:
    tree: str
    score: float
    words: tuple[str, ...] = ()

    def format(self) -> str:
        return f"{self.tree}\nscore: {self.score:.6f}"


def best_tree(result, cfg=None, bigram: BigramModel | None = None) -> BestTree | None:
    """Highest-scoring derivation under the root node of ``result``.

    Ties on score go to the lexicographically smallest bracketed tree.
    """
    if not result.accepted:
        return None
    bigram = bigram or result.bigram
    if bigram is None:
        raise ValueError("best_tree needs a bigram model")
    if cfg is None:
        cfg = result.config.lam
    scorer = Scorer(bigram, cfg, trees=True)
    ctx = BoundaryEntry(BEGIN_MARKER, BEGIN_MARKER, ZERO, "")
    best: tuple[float, str] | None = None
    for root in result.root_nodes:
        for e in scorer.node_front(root):
            full = join(ctx, e, bigram, sep="")
            score = entry_value(full, scorer.lam)
            if best is None or score > best[0] or (score == best[0] and full.tree < best[1]):
                best = (score, full.tree)
    if best is None:
        return None
    return BestTree(best[1], best[0], _leaf_words(best[1]))


def _leaf_words(tree: str) -> tuple[str, ...]:
    return tuple(re.findall(r"\([^()\s]+ ([^()\s]+)\)", tree))
