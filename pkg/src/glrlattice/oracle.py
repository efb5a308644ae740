"""Brute-force reference results for small instances.

Everything here is computed from first principles (path enumeration,
a memoized top-down tree enumerator, whole-path score sums) and never
touches the parser's stack, forest or the incremental scorer, so
agreement between the two is real evidence.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict

from .grammar import Grammar
from .lattice import BEGIN_MARKER, BigramModel, Lattice, WordHypothesis

MAX_PATHS = 10_000
MAX_WORDS = 12


class OracleError(ValueError):
    pass


def count_paths(lattice: Lattice) -> int:
    final = lattice.final_time
    by_start = defaultdict(list)
    for h in lattice:
        by_start[h.start].append(h)
    ways = {final: 1}
    for t in sorted({h.start for h in lattice}, reverse=True):
        ways[t] = sum(ways.get(h.end, 0) for h in by_start[t])
    return ways.get(0, 0) if len(lattice) else 0


def enumerate_paths(lattice: Lattice, max_paths: int = MAX_PATHS) -> set[tuple[WordHypothesis, ...]]:
    """Every time-contiguous hypothesis sequence from 0 to the final time."""
    if not len(lattice):
        return set()
    if count_paths(lattice) > max_paths:
        raise OracleError("too many lattice paths for brute force")
    final = lattice.final_time
    by_start = defaultdict(list)
    for h in lattice:
        by_start[h.start].append(h)
    out = set()
    stack: list[tuple[int, tuple[WordHypothesis, ...]]] = [(0, ())]
    while stack:
        t, path = stack.pop()
        if t == final:
            out.add(path)
            continue
        for h in by_start[t]:
            stack.append((h.end, path + (h,)))
    return out


def _check_cycle_free(g: Grammar) -> None:
    nullable: set[str] = set()
    while True:
        grown = {
            r.head.name for r in g.rules if all(s.name in nullable for s in r.rhs)
        } | nullable
        if grown == nullable:
            break
        nullable = grown
    # A => B when B can stand alone in some rhs of A with nullable siblings
    edges = defaultdict(set)
    for r in g.rules:
        names = [s.name for s in r.rhs]
        for k, name in enumerate(names):
            others = names[:k] + names[k + 1 :]
            if all(o in nullable for o in others):
                edges[r.head.name].add(name)
    state: dict[str, int] = {}

    def visit(a: str) -> None:
        state[a] = 1
        for b in edges[a]:
            if state.get(b) == 1:
                raise OracleError(f"grammar is cyclic through {a} and {b}")
            if b not in state:
                visit(b)
        state[a] = 2

    for a in list(edges):
        if a not in state:
            visit(a)


def recognize(g: Grammar, categories, words=None) -> set[str]:
    """All parse trees of a category sequence, as bracketed strings.

    Leaves read ``(cat word)`` when ``words`` is given, else ``(cat cat)``.
    """
    cats = [c if isinstance(c, str) else c.name for c in categories]
    if len(cats) > MAX_WORDS:
        raise OracleError("sequence too long for brute force")
    words = list(words) if words is not None else cats
    _check_cycle_free(g)
    terminals = {s.name for s in g.symbols.values() if s.is_terminal}
    rules_by_head = defaultdict(list)
    for r in g.rules:
        rules_by_head[r.head.name].append([s.name for s in r.rhs])

    sym_memo: dict[tuple[str, int, int], list[str]] = {}
    busy: dict[tuple[str, int, int], int] = {}
    # shallowest busy entry hit by a guard below the current call; results
    # that depended on a guard of an enclosing call are not memoized
    low = [math.inf]

    def derive(sym: str, i: int, j: int) -> list[str]:
        if sym in terminals:
            if j == i + 1 and cats[i] == sym:
                return [f"({sym} {words[i]})"]
            return []
        key = (sym, i, j)
        if key in sym_memo:
            return sym_memo[key]
        if key in busy:
            low[0] = min(low[0], busy[key])
            return []
        depth = busy[key] = len(busy)
        outer, low[0] = low[0], math.inf
        trees = []
        for rhs in rules_by_head[sym]:
            for kids in fill(tuple(rhs), i, j):
                trees.append(f"({sym} {' '.join(kids)})" if kids else f"({sym})")
        del busy[key]
        if low[0] >= depth:
            sym_memo[key] = trees
            low[0] = outer
        else:
            low[0] = min(outer, low[0])
        return trees

    def fill(rhs: tuple[str, ...], i: int, j: int) -> list[list[str]]:
        if not rhs:
            return [[]] if i == j else []
        out = []
        for k in range(i, j + 1):
            heads = derive(rhs[0], i, k)
            if not heads:
                continue
            for rest in fill(rhs[1:], k, j):
                for t in heads:
                    out.append([t] + rest)
        return out

    return set(derive(g.start.name, 0, len(cats)))


def path_trees(g: Grammar, path) -> set[str]:
    """Trees over every lexical category assignment of ``path``."""
    options = [sorted(s.name for s in g.lexicon.get(h.key, ())) for h in path]
    words = [h.key for h in path]
    trees: set[str] = set()
    for cats in itertools.product(*options):
        trees |= recognize(g, cats, words)
    return trees


def path_score(path, bigram: BigramModel, lam: float) -> float:
    acoustic = sum(h.acoustic_logp for h in path)
    frames = sum(h.frames for h in path)
    ngram = 0.0
    prev = BEGIN_MARKER
    for h in path:
        ngram += bigram.logprob(prev, h.key)
        prev = h.key
    return lam * ngram / len(path) + acoustic / frames


def grammatical_paths(g: Grammar, lattice: Lattice) -> dict[tuple[WordHypothesis, ...], set[str]]:
    out = {}
    for path in enumerate_paths(lattice):
        trees = path_trees(g, path)
        if trees:
            out[path] = trees
    return out


def best_path(g: Grammar, lattice: Lattice, bigram: BigramModel, lam: float = 1.0):
    """``(path, tree, score)`` maximizing the whole-path score, or None."""
    lam = getattr(lam, "lam", lam)
    best = None
    for path, trees in grammatical_paths(g, lattice).items():
        score = path_score(path, bigram, lam)
        tree = min(trees)
        if best is None or score > best[2] or (score == best[2] and tree < best[1]):
            best = (path, tree, score)
    return best
