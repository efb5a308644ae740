"""Graph-structured stack, packed parse forest and agenda actions.

A vertex is a left context ``(time, state)``.  Each of its links points at
the forest node that was consumed to reach it and at the set of predecessor
vertices where that node starts.  Nodes are unique per ``(cat, start, end)``
and pack every alternative derivation of that span.
"""

from __future__ import annotations

import json
from typing import Callable, NamedTuple, Union

from .grammar import Symbol
from .lattice import WordHypothesis


class ForestError(ValueError):
    pass


class Node:
    __slots__ = ("cat", "start", "end", "hypotheses", "seqs", "parents", "links")

    def __init__(self, cat: Symbol, start: int, end: int):
        self.cat = cat
        self.start = start
        self.end = end
        # insertion-ordered sets
        self.hypotheses: dict[WordHypothesis, None] = {}
        self.seqs: dict[tuple[Node, ...], None] = {}
        self.parents: set[Node] = set()
        self.links: list[Link] = []

    @property
    def key(self) -> tuple[str, int, int]:
        return (self.cat.name, self.start, self.end)

    @property
    def label(self) -> str:
        return f"{self.cat.name}:{self.start}:{self.end}"

    @property
    def is_terminal(self) -> bool:
        return self.cat.is_terminal

    def add_hypothesis(self, h: WordHypothesis) -> bool:
        if not self.is_terminal:
            raise ForestError(f"hypothesis added to nonterminal node {self.label}")
        if h in self.hypotheses:
            return False
        self.hypotheses[h] = None
        return True

    def add_seq(self, seq: tuple[Node, ...]) -> bool:
        if self.is_terminal:
            raise ForestError(f"subtree sequence added to terminal node {self.label}")
        if seq in self.seqs:
            return False
        self.seqs[seq] = None
        for child in seq:
            child.parents.add(self)
        return True

    def __repr__(self) -> str:
        return f"Node({self.label})"


class Vertex:
    __slots__ = ("time", "state", "links", "pending", "succ_links")

    def __init__(self, time: int, state: int):
        self.time = time
        self.state = state
        self.links: dict[Node, Link] = {}
        # incomplete searches whose current link has this vertex among its preds
        self.pending: dict[tuple[int, tuple[Node, ...], int], None] = {}
        # links that list this vertex as a predecessor
        self.succ_links: list[Link] = []

    @property
    def key(self) -> tuple[int, int]:
        return (self.time, self.state)

    def __repr__(self) -> str:
        return f"Vertex{self.key}"


class Link:
    """Connects ``owner`` to predecessor vertices through ``node``.

    A sentinel link has no node and no owner; it is the starting point of
    a reduction's leftward search.
    """

    __slots__ = ("owner", "node", "preds", "searches")

    def __init__(self, owner: Vertex | None, node: Node | None, pred: Vertex):
        self.owner = owner
        self.node = node
        self.preds: dict[Vertex, None] = {pred: None}
        # (rule, seq, ending_time) -> node built when the search completed here, else None
        self.searches: dict[tuple[int, tuple[Node, ...], int], Node | None] = {}

    @property
    def is_sentinel(self) -> bool:
        return self.node is None

    @property
    def left_time(self) -> int:
        return next(iter(self.preds)).time

    @property
    def key(self) -> tuple:
        if self.node is None:
            return ("sentinel", next(iter(self.preds)).key)
        return (self.owner.key, self.node.key)

    def __repr__(self) -> str:
        if self.node is None:
            return f"SentinelLink({next(iter(self.preds))!r})"
        return f"Link({self.owner!r} <- {self.node.label})"


class ShiftAction(NamedTuple):
    vertex: Vertex
    node: Node
    time: int
    state: int

    @property
    def sort_key(self) -> tuple:
        return (0, self.time, self.state, self.vertex.key, self.node.key)


class SearchAction(NamedTuple):
    rule: int
    seq: tuple[Node, ...]
    link: Link
    ending_time: int

    @property
    def sort_key(self) -> tuple:
        return (1, self.ending_time, self.rule, self.link.key, tuple(n.key for n in self.seq))


class NewHypoAction(NamedTuple):
    hypothesis: WordHypothesis

    @property
    def sort_key(self) -> tuple:
        return (2, self.hypothesis.ident)


Action = Union[ShiftAction, SearchAction, NewHypoAction]


class GssState:
    """Mutable parser state: the stack, the forest and the executed NewHypos.

    Mutation listeners get ``(kind, obj)`` with kind one of ``"node"``
    (content added), ``"link"`` (link created or predecessor added) and
    ``"vertex"`` (link added to the vertex).
    """

    def __init__(self):
        self.vertices: dict[tuple[int, int], Vertex] = {}
        self.by_time: dict[int, list[Vertex]] = {}
        self.forest: dict[tuple[str, int, int], Node] = {}
        self.old_hypos: dict[WordHypothesis, None] = {}
        self.old_hypos_by_start: dict[int, list[WordHypothesis]] = {}
        self.link_count = 0
        self.listeners: list[Callable[[str, object], None]] = []

    def notify(self, kind: str, obj) -> None:
        for fn in self.listeners:
            fn(kind, obj)

    def find_or_create_vertex(self, time: int, state: int) -> tuple[Vertex, bool]:
        v = self.vertices.get((time, state))
        if v is not None:
            return v, False
        v = Vertex(time, state)
        self.vertices[time, state] = v
        self.by_time.setdefault(time, []).append(v)
        return v, True

    def find_or_create_node(self, cat: Symbol, start: int, end: int) -> tuple[Node, bool]:
        if start > end or (start == end and cat.is_terminal):
            raise ForestError(f"bad span [{start}, {end}] for {cat.name}")
        node = self.forest.get((cat.name, start, end))
        if node is not None:
            return node, False
        node = Node(cat, start, end)
        self.forest[node.key] = node
        return node, True

    def add_link(self, owner: Vertex, node: Node, pred: Vertex) -> Link:
        link = Link(owner, node, pred)
        owner.links[node] = link
        node.links.append(link)
        pred.succ_links.append(link)
        self.link_count += 1
        self.notify("link", link)
        self.notify("vertex", owner)
        return link

    def add_pred(self, link: Link, pred: Vertex) -> bool:
        if pred in link.preds:
            return False
        link.preds[pred] = None
        pred.succ_links.append(link)
        self.notify("link", link)
        return True

    def add_hypothesis(self, node: Node, h: WordHypothesis) -> bool:
        changed = node.add_hypothesis(h)
        if changed:
            self.notify("node", node)
        return changed

    def add_seq(self, node: Node, seq: tuple[Node, ...]) -> bool:
        changed = node.add_seq(seq)
        if changed:
            self.notify("node", node)
        return changed

    def record_hypo(self, h: WordHypothesis) -> None:
        if h not in self.old_hypos:
            self.old_hypos[h] = None
            self.old_hypos_by_start.setdefault(h.start, []).append(h)

    def links(self):
        for v in self.vertices.values():
            yield from v.links.values()


# ---------------------------------------------------------------------------
# canonical dumps and validators


def forest_dump(forest: dict[tuple[str, int, int], Node]) -> str:
    payload = {}
    for node in forest.values():
        if node.is_terminal:
            payload[node.label] = {
                "hypotheses": sorted(
                    [h.start, h.end, h.key, h.acoustic_logp] for h in node.hypotheses
                )
            }
        else:
            payload[node.label] = {
                "alternatives": sorted([c.label for c in seq] for seq in node.seqs)
            }
    return json.dumps(payload, sort_keys=True, ensure_ascii=False)


def gss_keys(state: GssState) -> tuple[list, list]:
    vertices = sorted(state.vertices)
    links = sorted(
        (link.owner.key, link.node.key, tuple(sorted(p.key for p in link.preds)))
        for link in state.links()
    )
    return vertices, links


def validate_forest(forest: dict[tuple[str, int, int], Node], rules=None) -> None:
    """Check tiling and content discipline of every node; raise ForestError."""
    heads_rhs = None
    if rules is not None:
        heads_rhs = {(r.head.name, tuple(s.name for s in r.rhs)) for r in rules}
    for key, node in forest.items():
        if key != node.key:
            raise ForestError(f"node stored under wrong key {key}")
        if node.is_terminal:
            if node.seqs or not node.hypotheses:
                raise ForestError(f"terminal node {node.label} has bad content")
            for h in node.hypotheses:
                if (h.start, h.end) != (node.start, node.end):
                    raise ForestError(f"hypothesis {h} misplaced in {node.label}")
            continue
        if node.hypotheses or not node.seqs:
            raise ForestError(f"nonterminal node {node.label} has bad content")
        for seq in node.seqs:
            t = node.start
            for child in seq:
                if child.start != t or forest.get(child.key) is not child:
                    raise ForestError(f"children of {node.label} do not tile")
                t = child.end
            if t != node.end:
                raise ForestError(f"children of {node.label} do not reach its end")
            if heads_rhs is not None:
                if (node.cat.name, tuple(c.cat.name for c in seq)) not in heads_rhs:
                    raise ForestError(f"no rule licenses {node.label} -> {seq}")


def node_yields(node: Node, _memo=None) -> set[tuple[WordHypothesis, ...]]:
    """All hypothesis sequences derivable from ``node``; acyclic forests only."""
    memo = {} if _memo is None else _memo
    if node in memo:
        if memo[node] is None:
            return set()  # cyclic derivation, contributes nothing new
        return memo[node]
    memo[node] = None
    if node.is_terminal:
        out = {(h,) for h in node.hypotheses}
    else:
        out = set()
        for seq in node.seqs:
            partial = {()}
            for child in seq:
                ys = node_yields(child, memo)
                partial = {p + y for p in partial for y in ys}
            out |= partial
    memo[node] = out
    return out


def node_trees(node: Node, _memo=None) -> set[str]:
    """Every bracketed tree packed under ``node`` (small acyclic forests only)."""
    memo = {} if _memo is None else _memo
    if node in memo:
        return memo[node] or set()
    memo[node] = None
    if node.is_terminal:
        out = {f"({node.cat.name} {h.key})" for h in node.hypotheses}
    else:
        out = set()
        for seq in node.seqs:
            partial = [""]
            for child in seq:
                partial = [p + " " + t for p in partial for t in node_trees(child, memo)]
            out |= {f"({node.cat.name}{p})" for p in partial}
    memo[node] = out
    return out
