"""Agenda-driven GLR parsing of word lattices.

The parser knows three kinds of work item:

* ``NewHypo`` turns a word hypothesis into terminal nodes and offers them
  to every vertex waiting at the hypothesis' start time;
* ``Shift`` adds a vertex and/or link to the graph-structured stack;
* ``Search`` walks a reduction leftwards over links, one right-hand-side
  symbol per step, and builds the reduced node when complete.

Each action records enough on the stack (per-link search registries,
per-vertex pending searches, executed NewHypos) that work arriving later
is replayed against it.  The result is that the final forest does not
depend on the order in which a :class:`Strategy` hands out actions.
"""

from __future__ import annotations

import random
from collections import Counter, deque
from dataclasses import dataclass, field

from .grammar import Grammar, SlrTable, categories_of_key
from .gss import (
    Action,
    GssState,
    Link,
    NewHypoAction,
    Node,
    SearchAction,
    ShiftAction,
    Vertex,
)
from .lattice import BigramModel, Lattice, WordHypothesis


@dataclass
class ParseConfig:
    lam: float = 1.0
    strict_bigram: bool = False
    stop_at_accept: bool = False
    max_actions: int | None = None

    def __post_init__(self) -> None:
        if self.lam < 0:
            raise ValueError("lambda must be nonnegative")


class Strategy:
    """Decides the order in which agenda actions are carried out.

    A strategy only stores and hands back actions the engine gave it.
    """

    def add(self, action: Action, engine: "Engine") -> None:
        raise NotImplementedError

    def next(self, engine: "Engine") -> Action | None:
        raise NotImplementedError

    def stats(self) -> dict[str, int]:
        return {}


class LifoStrategy(Strategy):
    def __init__(self):
        self.stack: list[Action] = []

    def add(self, action, engine):
        self.stack.append(action)

    def next(self, engine):
        return self.stack.pop() if self.stack else None


class FifoStrategy(Strategy):
    def __init__(self):
        self.queue: deque[Action] = deque()

    def add(self, action, engine):
        self.queue.append(action)

    def next(self, engine):
        return self.queue.popleft() if self.queue else None


class RandomStrategy(Strategy):
    """Uniformly random agenda order; used to check order-independence."""

    def __init__(self, seed: int | None = None):
        self.rng = random.Random(seed)
        self.pool: list[Action] = []

    def add(self, action, engine):
        self.pool.append(action)

    def next(self, engine):
        if not self.pool:
            return None
        i = self.rng.randrange(len(self.pool))
        self.pool[i], self.pool[-1] = self.pool[-1], self.pool[i]
        return self.pool.pop()


@dataclass
class ParseResult:
    accepted: bool
    root_nodes: list[Node]
    stats: dict[str, int]
    state: GssState
    grammar: Grammar
    lattice: Lattice
    bigram: BigramModel | None = None
    config: ParseConfig = field(default_factory=ParseConfig)
    budget_exhausted: bool = False

    @property
    def forest(self):
        return self.state.forest


class Engine:
    def __init__(
        self,
        grammar: Grammar,
        table: SlrTable,
        lattice: Lattice,
        strategy: Strategy | None = None,
        config: ParseConfig | None = None,
        bigram: BigramModel | None = None,
    ):
        self.grammar = grammar
        self.table = table
        self.lattice = lattice
        self.bigram = bigram
        self.config = config or ParseConfig()
        self.strategy = strategy if strategy is not None else LifoStrategy()
        self.state = GssState()
        self.seen: set[Action] = set()
        self.stats: Counter[str] = Counter()
        self.root_key = (grammar.start.name, 0, lattice.final_time)
        self.accepted = False
        self.initial_vertex: Vertex | None = None

    # -- agenda ------------------------------------------------------------

    def enqueue(self, action: Action) -> None:
        # The agenda is a set over the whole run: re-deriving an action that was
        # already issued is a no-op, since registries replay later changes.
        if action in self.seen:
            self.stats["agenda.duplicates"] += 1
            return
        self.seen.add(action)
        self.stats["agenda.enqueued"] += 1
        self.strategy.add(action, self)

    def execute(self, action: Action) -> None:
        if isinstance(action, ShiftAction):
            self.exec_shift(action)
        elif isinstance(action, SearchAction):
            self.exec_search(action)
        else:
            self.exec_new_hypo(action.hypothesis)

    # -- the three actions -------------------------------------------------

    def exec_new_hypo(self, h: WordHypothesis) -> None:
        self.stats["actions.newhypo"] += 1
        st = self.state
        for cat in categories_of_key(self.grammar, h.key):
            node, _ = st.find_or_create_node(cat, h.start, h.end)
            st.add_hypothesis(node, h)
            for v in st.by_time.get(h.start, ()):
                target = self.table.shift(v.state, cat.name)
                if target is not None:
                    self.enqueue(ShiftAction(v, node, h.end, target))
        st.record_hypo(h)

    def exec_shift(self, a: ShiftAction) -> None:
        self.stats["actions.shift"] += 1
        st = self.state
        target, created = st.find_or_create_vertex(a.time, a.state)
        if created:
            self.stats["branch.shift.4"] += 1
            st.add_link(target, a.node, a.vertex)
            self._open_vertex(target)
            return

        link = target.links.get(a.node)
        if link is None:
            self.stats["branch.shift.3"] += 1
            link = st.add_link(target, a.node, a.vertex)
            for rule, seq, et in list(target.pending):
                self.enqueue(SearchAction(rule, (a.node,) + seq, link, et))
            return

        self.stats["branch.shift.2"] += 1
        if not st.add_pred(link, a.vertex):
            return
        head = self.grammar.rules
        for (rule, seq, et), built in list(link.searches.items()):
            if built is not None:
                goto = self.table.shift(a.vertex.state, head[rule].head.name)
                if goto is not None:
                    self.enqueue(ShiftAction(a.vertex, built, et, goto))
            else:
                self._extend_through(a.vertex, rule, seq, et)

    def exec_search(self, a: SearchAction) -> None:
        self.stats["actions.search"] += 1
        rule = self.grammar.rules[a.rule]
        link = a.link
        if len(a.seq) == len(rule.rhs):
            self.stats["branch.search.2"] += 1
            node, _ = self.state.find_or_create_node(rule.head, link.left_time, a.ending_time)
            self.state.add_seq(node, a.seq)
            link.searches[a.rule, a.seq, a.ending_time] = node
            for pred in list(link.preds):
                goto = self.table.shift(pred.state, rule.head.name)
                if goto is not None:
                    self.enqueue(ShiftAction(pred, node, a.ending_time, goto))
            if node.key == self.root_key:
                self.accepted = True
        else:
            self.stats["branch.search.3"] += 1
            link.searches.setdefault((a.rule, a.seq, a.ending_time), None)
            for pred in list(link.preds):
                self._extend_through(pred, a.rule, a.seq, a.ending_time)

    # -- helpers -----------------------------------------------------------

    def _extend_through(self, v: Vertex, rule: int, seq: tuple[Node, ...], et: int) -> None:
        v.pending[rule, seq, et] = None
        for node, link in list(v.links.items()):
            self.enqueue(SearchAction(rule, (node,) + seq, link, et))

    def _open_vertex(self, v: Vertex) -> None:
        """Work owed to a brand-new vertex: earlier hypotheses and its reductions."""
        for h in self.state.old_hypos_by_start.get(v.time, ()):
            for cat in categories_of_key(self.grammar, h.key):
                target = self.table.shift(v.state, cat.name)
                if target is not None:
                    node = self.state.forest[cat.name, h.start, h.end]
                    self.enqueue(ShiftAction(v, node, h.end, target))
        rules = self.table.reduces(v.state)
        if rules:
            sentinel = Link(None, None, v)
            for r in rules:
                self.enqueue(SearchAction(r, (), sentinel, v.time))

    # -- main routine ------------------------------------------------------

    def start(self) -> None:
        v0, _ = self.state.find_or_create_vertex(0, 0)
        self.initial_vertex = v0
        self._open_vertex(v0)
        for h in self.lattice:
            self.enqueue(NewHypoAction(h))

    def step(self) -> bool:
        action = self.strategy.next(self)
        if action is None:
            return False
        self.execute(action)
        return True

    def run(self) -> ParseResult:
        self.start()
        cap = self.config.max_actions
        executed = 0
        exhausted = False
        while True:
            if self.accepted and self.config.stop_at_accept:
                break
            if cap is not None and executed >= cap:
                exhausted = True
                break
            if not self.step():
                break
            executed += 1
        return self.result(budget_exhausted=exhausted)

    def result(self, budget_exhausted: bool = False) -> ParseResult:
        st = self.state
        root = st.forest.get(self.root_key)
        stats = dict(self.stats)
        stats.update(self.strategy.stats())
        stats["vertices"] = len(st.vertices)
        stats["links"] = st.link_count
        stats["nodes"] = len(st.forest)
        stats["actions.total"] = sum(
            self.stats[k] for k in ("actions.shift", "actions.search", "actions.newhypo")
        )
        return ParseResult(
            accepted=root is not None,
            root_nodes=[root] if root is not None else [],
            stats=stats,
            state=st,
            grammar=self.grammar,
            lattice=self.lattice,
            bigram=self.bigram,
            config=self.config,
            budget_exhausted=budget_exhausted,
        )


def run(
    grammar: Grammar,
    table: SlrTable,
    lattice: Lattice,
    bigram: BigramModel | None = None,
    config: ParseConfig | None = None,
    strategy: Strategy | None = None,
) -> ParseResult:
    """Parse ``lattice`` to agenda exhaustion (or first accept, per config)."""
    return Engine(grammar, table, lattice, strategy, config, bigram).run()
