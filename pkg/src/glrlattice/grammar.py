"""Context-free grammars with a lexicon, and SLR(1) tables that keep conflicts.

Grammar file format, one declaration per line::

    # comment
    start S            (optional, defaults to the head of the first rule)
    S -> NP VP
    A ->               (empty right-hand side)
    lex n dog          (word "dog" may be read as category n)

A symbol that heads some rule is a nonterminal; every other symbol is a
terminal category.  The table is built for GLR use: cells may hold several
actions and nothing is resolved.
"""

from __future__ import annotations

import json
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Union

END = "<$>"
AUGMENTED_START = "<S'>"

TERMINAL = "terminal"
NONTERMINAL = "nonterminal"


class GrammarError(ValueError):
    """Raised for malformed grammar text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True, order=True)
class Symbol:
    id: int
    name: str = field(compare=False)
    kind: str = field(compare=False)

    @property
    def is_terminal(self) -> bool:
        return self.kind == TERMINAL

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Rule:
    id: int
    head: Symbol
    rhs: tuple[Symbol, ...]

    def __str__(self) -> str:
        return f"{self.head} -> {' '.join(s.name for s in self.rhs)}".rstrip()


@dataclass
class Grammar:
    symbols: dict[str, Symbol]
    rules: list[Rule]
    start: Symbol
    lexicon: dict[str, frozenset[Symbol]]

    def symbol(self, name: str) -> Symbol:
        return self.symbols[name]

    @property
    def terminals(self) -> list[Symbol]:
        return sorted(s for s in self.symbols.values() if s.is_terminal)

    @property
    def nonterminals(self) -> list[Symbol]:
        return sorted(s for s in self.symbols.values() if not s.is_terminal)

    def rules_for(self, head: Symbol) -> list[Rule]:
        return [r for r in self.rules if r.head == head]

    def to_text(self) -> str:
        lines = [f"start {self.start.name}"]
        lines += [str(r) for r in self.rules]
        for word in sorted(self.lexicon):
            for cat in sorted(self.lexicon[word]):
                lines.append(f"lex {cat.name} {word}")
        return "\n".join(lines) + "\n"


def parse_grammar(text: str) -> Grammar:
    raw_rules: list[tuple[int, str, list[str]]] = []
    raw_lex: list[tuple[int, str, str]] = []
    start_name: str | None = None
    start_line = 0

    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "lex":
            if len(tokens) != 3:
                raise GrammarError("expected 'lex CAT word'", lineno)
            raw_lex.append((lineno, tokens[1], tokens[2]))
        elif tokens[0] == "start":
            if len(tokens) != 2:
                raise GrammarError("expected 'start SYM'", lineno)
            start_name, start_line = tokens[1], lineno
        elif len(tokens) >= 2 and tokens[1] == "->":
            raw_rules.append((lineno, tokens[0], tokens[2:]))
        else:
            raise GrammarError(f"cannot parse {line!r}", lineno)

    if not raw_rules:
        raise GrammarError("grammar has no rules")

    heads = {head for _, head, _ in raw_rules}
    order: dict[str, int] = {}

    def note(name: str, lineno: int) -> None:
        if name.startswith("<") or name == "->":
            raise GrammarError(f"reserved symbol name {name!r}", lineno)
        order.setdefault(name, len(order))

    for lineno, head, rhs in raw_rules:
        note(head, lineno)
        for name in rhs:
            note(name, lineno)
    for lineno, cat, _ in raw_lex:
        if cat in heads:
            raise GrammarError(f"lexical category {cat!r} is a nonterminal", lineno)
        note(cat, lineno)

    symbols = {
        name: Symbol(i, name, NONTERMINAL if name in heads else TERMINAL)
        for name, i in order.items()
    }
    rules = [
        Rule(i, symbols[head], tuple(symbols[n] for n in rhs))
        for i, (_, head, rhs) in enumerate(raw_rules)
    ]

    if start_name is None:
        start = rules[0].head
    elif start_name not in heads:
        raise GrammarError(f"start symbol {start_name!r} heads no rule", start_line)
    else:
        start = symbols[start_name]

    lexicon: dict[str, set[Symbol]] = defaultdict(set)
    for _, cat, word in raw_lex:
        lexicon[word].add(symbols[cat])
    return Grammar(symbols, rules, start, {w: frozenset(c) for w, c in lexicon.items()})


def categories_of_key(g: Grammar, key: str) -> tuple[Symbol, ...]:
    """Terminal categories the lexicon allows for ``key``, ordered by symbol id."""
    return tuple(sorted(g.lexicon.get(key, ())))


# ---------------------------------------------------------------------------
# SLR(1) construction


class Shift(NamedTuple):
    state: int

    def __str__(self) -> str:
        return f"s{self.state}"


class Reduce(NamedTuple):
    rule: int

    def __str__(self) -> str:
        return f"r{self.rule}"


class Accept(NamedTuple):
    def __str__(self) -> str:
        return "acc"


TableAction = Union[Shift, Reduce, Accept]

# An LR(0) item is (rule index, dot position); rule index -1 is the augmented rule.
Item = tuple[int, int]


def nullable_set(g: Grammar) -> set[Symbol]:
    nullable: set[Symbol] = set()
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            if r.head not in nullable and all(s in nullable for s in r.rhs):
                nullable.add(r.head)
                changed = True
    return nullable


def first_sets(g: Grammar, nullable: set[Symbol]) -> dict[Symbol, set[str]]:
    first: dict[Symbol, set[str]] = {s: set() for s in g.symbols.values()}
    for s in g.terminals:
        first[s].add(s.name)
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            acc = first[r.head]
            before = len(acc)
            for s in r.rhs:
                acc |= first[s]
                if s not in nullable:
                    break
            changed |= len(acc) != before
    return first


def follow_sets(g: Grammar) -> dict[Symbol, set[str]]:
    nullable = nullable_set(g)
    first = first_sets(g, nullable)
    follow: dict[Symbol, set[str]] = {s: set() for s in g.nonterminals}
    follow[g.start].add(END)
    changed = True
    while changed:
        changed = False
        for r in g.rules:
            trailer = set(follow[r.head])
            for s in reversed(r.rhs):
                if s.is_terminal:
                    trailer = {s.name}
                    continue
                before = len(follow[s])
                follow[s] |= trailer
                changed |= len(follow[s]) != before
                trailer = trailer | first[s] if s in nullable else set(first[s])
    return follow


@dataclass
class SlrTable:
    state_count: int
    actions: dict[tuple[int, str], tuple[TableAction, ...]]
    grammar: Grammar
    _reduces: dict[int, tuple[int, ...]] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        by_state: dict[int, set[int]] = defaultdict(set)
        for (state, _), acts in self.actions.items():
            for a in acts:
                if isinstance(a, Reduce):
                    by_state[state].add(a.rule)
        self._reduces = {s: tuple(sorted(rs)) for s, rs in by_state.items()}

    def lookup(self, state: int, symbol: str) -> tuple[TableAction, ...]:
        return self.actions.get((state, symbol), ())

    def shift(self, state: int, symbol: str) -> int | None:
        """Target of the shift/goto on ``symbol``, or None for a dead branch."""
        for a in self.actions.get((state, symbol), ()):
            if isinstance(a, Shift):
                return a.state
        return None

    def reduces(self, state: int) -> tuple[int, ...]:
        """Every rule reduced in ``state`` under any lookahead."""
        return self._reduces.get(state, ())

    def conflict_cells(self) -> list[tuple[int, str]]:
        return sorted(k for k, acts in self.actions.items() if len(acts) > 1)

    def report(self) -> str:
        return f"states: {self.state_count}, conflict cells: {len(self.conflict_cells())}"

    def to_json(self) -> str:
        states: dict[str, dict[str, list[str]]] = {}
        for (state, sym), acts in sorted(self.actions.items()):
            states.setdefault(str(state), {})[sym] = [str(a) for a in acts]
        payload = {
            "states": self.state_count,
            "rules": [str(r) for r in self.grammar.rules],
            "actions": states,
            "conflicts": [[s, sym] for s, sym in self.conflict_cells()],
        }
        return json.dumps(payload, indent=1, sort_keys=True, ensure_ascii=False)


class _Automaton:
    """LR(0) item-set automaton over the augmented grammar."""

    def __init__(self, g: Grammar):
        self.g = g
        self.by_head: dict[Symbol, list[int]] = defaultdict(list)
        for r in g.rules:
            self.by_head[r.head].append(r.id)

    def rhs(self, rule: int) -> tuple[Symbol, ...]:
        return (self.g.start,) if rule < 0 else self.g.rules[rule].rhs

    def closure(self, kernel: Iterable[Item]) -> frozenset[Item]:
        items = set(kernel)
        todo = list(items)
        while todo:
            rule, dot = todo.pop()
            rhs = self.rhs(rule)
            if dot < len(rhs) and not rhs[dot].is_terminal:
                for r in self.by_head[rhs[dot]]:
                    if (r, 0) not in items:
                        items.add((r, 0))
                        todo.append((r, 0))
        return frozenset(items)

    def build(self) -> tuple[list[frozenset[Item]], dict[tuple[int, Symbol], int]]:
        states = [self.closure([(-1, 0)])]
        index = {states[0]: 0}
        transitions: dict[tuple[int, Symbol], int] = {}
        queue = deque([0])
        while queue:
            i = queue.popleft()
            moves: dict[Symbol, list[Item]] = defaultdict(list)
            for rule, dot in states[i]:
                rhs = self.rhs(rule)
                if dot < len(rhs):
                    moves[rhs[dot]].append((rule, dot + 1))
            for sym in sorted(moves):
                target = self.closure(moves[sym])
                if target not in index:
                    index[target] = len(states)
                    states.append(target)
                    queue.append(index[target])
                transitions[i, sym] = index[target]
        return states, transitions


def build_slr_table(g: Grammar) -> SlrTable:
    automaton = _Automaton(g)
    states, transitions = automaton.build()
    follow = follow_sets(g)
    cells: dict[tuple[int, str], list[TableAction]] = defaultdict(list)

    for (i, sym), j in sorted(transitions.items()):
        cells[i, sym.name].append(Shift(j))
    for i, items in enumerate(states):
        for rule, dot in sorted(items):
            if dot != len(automaton.rhs(rule)):
                continue
            if rule < 0:
                cells[i, END].append(Accept())
            else:
                for t in sorted(follow[g.rules[rule].head]):
                    cells[i, t].append(Reduce(rule))
    return SlrTable(len(states), {k: tuple(v) for k, v in cells.items()}, g)
