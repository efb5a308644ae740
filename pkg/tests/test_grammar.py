import json
import random
from collections import deque

import pytest
from hypothesis import given, settings, strategies as st

from glrlattice.fixtures import G1_TEXT, G2_TEXT, G3_TEXT, g1, g2, g3
from glrlattice.grammar import (
    END,
    Accept,
    GrammarError,
    Reduce,
    Shift,
    build_slr_table,
    categories_of_key,
    follow_sets,
    parse_grammar,
)
from glrlattice.synth import random_cfg, random_grammar_text


# -- reference SLR construction on plain strings ---------------------------


def ref_follow(rules, start, terminals):
    """FOLLOW via explicit FIRST-of-string recursion; rules are (head, rhs)."""
    heads = {h for h, _ in rules}
    nullable = set()
    first = {h: set() for h in heads}
    changed = True
    while changed:
        changed = False
        for h, rhs in rules:
            if all(s in nullable for s in rhs) and h not in nullable:
                nullable.add(h)
                changed = True
            for s in rhs:
                add = {s} if s not in heads else first[s]
                if not add <= first[h]:
                    first[h] |= add
                    changed = True
                if s not in nullable:
                    break

    def first_of(seq):
        out = set()
        for s in seq:
            out |= {s} if s not in heads else first[s]
            if s not in nullable:
                return out, False
        return out, True

    follow = {h: set() for h in heads}
    follow[start].add(END)
    changed = True
    while changed:
        changed = False
        for h, rhs in rules:
            for k, s in enumerate(rhs):
                if s not in heads:
                    continue
                f, all_null = first_of(rhs[k + 1 :])
                new = f | (follow[h] if all_null else set())
                if not new <= follow[s]:
                    follow[s] |= new
                    changed = True
    return follow


def ref_table(g):
    start = g.start.name
    rules = [("<S'>", (start,))] + [(r.head.name, tuple(s.name for s in r.rhs)) for r in g.rules]
    heads = {h for h, _ in rules}
    follow = ref_follow(rules[1:], start, None)

    def closure(items):
        items = set(items)
        while True:
            extra = {
                (k, 0)
                for (i, d) in items
                if d < len(rules[i][1]) and rules[i][1][d] in heads
                for k, (h, _) in enumerate(rules)
                if h == rules[i][1][d]
            }
            if extra <= items:
                return frozenset(items)
            items |= extra

    def goto(state, sym):
        return closure({(i, d + 1) for i, d in state if d < len(rules[i][1]) and rules[i][1][d] == sym})

    rows = {}
    todo = deque([closure({(0, 0)})])
    while todo:
        s = todo.popleft()
        if s in rows:
            continue
        row = {}
        for i, d in s:
            rhs = rules[i][1]
            if d < len(rhs):
                t = goto(s, rhs[d])
                row.setdefault(rhs[d], set()).add(("goto", t))
                todo.append(t)
            elif i == 0:
                row.setdefault(END, set()).add(("acc",))
            else:
                for a in follow[rules[i][0]]:
                    row.setdefault(a, set()).add(("r", i - 1))
        rows[s] = row
    return closure({(0, 0)}), rows


def assert_tables_match(g):
    table = build_slr_table(g)
    ref_start, rows = ref_table(g)
    mapping = {ref_start: 0}
    todo = deque([ref_start])
    while todo:
        rs = todo.popleft()
        mine = mapping[rs]
        row = rows[rs]
        symbols = {sym for (state, sym) in table.actions if state == mine}
        assert symbols == set(row), (mine, symbols, set(row))
        for sym, acts in row.items():
            got = table.lookup(mine, sym)
            assert len(got) == len(acts)
            assert {("r", a.rule) for a in got if isinstance(a, Reduce)} == {a for a in acts if a[0] == "r"}
            assert any(isinstance(a, Accept) for a in got) == (("acc",) in acts)
            targets = [a[1] for a in acts if a[0] == "goto"]
            if targets:
                (t,) = targets
                j = table.shift(mine, sym)
                if t in mapping:
                    assert mapping[t] == j
                else:
                    assert j not in mapping.values()
                    mapping[t] = j
                    todo.append(t)
    assert len(mapping) == len(rows) == table.state_count


# -- parsing -----------------------------------------------------------------


def test_parse_g1():
    g = g1()
    assert len(g.rules) == 3
    assert g.start.name == "S"
    assert {w: {c.name for c in cs} for w, cs in g.lexicon.items()} == {"dog": {"n"}, "barks": {"v"}}


def test_parse_g2_and_g3():
    g = g2()
    assert len(g.rules) == 2
    assert {w: {c.name for c in cs} for w, cs in g.lexicon.items()} == {"a": {"a"}}
    g = g3()
    assert len(g.rules) == 3
    assert [len(r.rhs) for r in g.rules] == [2, 0, 1]


def test_rule_ids_follow_file_order():
    g = parse_grammar("S -> B\nS -> A\nA -> x\nB -> y\n")
    assert [str(r) for r in g.rules] == ["S -> B", "S -> A", "A -> x", "B -> y"]
    assert [r.id for r in g.rules] == [0, 1, 2, 3]


def test_symbol_kinds_and_start_directive():
    g = parse_grammar("start T\nS -> T\nT -> x\n# comment\nlex x w\n")
    assert g.start.name == "T"
    assert g.symbol("x").is_terminal and not g.symbol("S").is_terminal


def test_round_trip_text():
    g = g3()
    again = parse_grammar(g.to_text())
    assert [str(r) for r in again.rules] == [str(r) for r in g.rules]
    assert again.lexicon.keys() == g.lexicon.keys()


@pytest.mark.parametrize(
    "text, line",
    [
        ("S -> a\nnonsense here\n", 2),
        ("S -> a\nlex a\n", 2),
        ("S -> <x>\n", 1),
        ("S -> a\nlex S w\n", 2),
        ("S -> a\nstart Q\n", 2),
        ("", None),
    ],
)
def test_grammar_errors_carry_line(text, line):
    with pytest.raises(GrammarError) as err:
        parse_grammar(text)
    assert err.value.line == line


def test_categories_of_key():
    g = g1()
    assert [c.name for c in categories_of_key(g, "dog")] == ["n"]
    assert categories_of_key(g, "xyz") == ()
    g = parse_grammar("S -> n\nS -> v\nlex n bank\nlex v bank\n")
    assert {c.name for c in categories_of_key(g, "bank")} == {"n", "v"}


# -- tables ---------------------------------------------------------------


def test_g1_table():
    t = build_slr_table(g1())
    assert t.report() == "states: 6, conflict cells: 0"


def test_g2_table_has_shift_reduce_conflict():
    t = build_slr_table(g2())
    assert t.report() == "states: 4, conflict cells: 1"
    (cell,) = t.conflict_cells()
    acts = t.lookup(*cell)
    assert cell[1] == "a"
    assert {type(a) for a in acts} == {Shift, Reduce}
    assert [a.rule for a in acts if isinstance(a, Reduce)] == [0]


def test_g3_epsilon_reduce_on_b_from_state_0():
    g = g3()
    t = build_slr_table(g)
    assert Reduce(1) in t.lookup(0, "b")
    assert {s.name: v for s, v in follow_sets(g).items() if s.name == "A"} == {"A": {"b"}}


def test_table_json_is_deterministic():
    a = build_slr_table(g2()).to_json()
    b = build_slr_table(parse_grammar(G2_TEXT)).to_json()
    assert a == b
    payload = json.loads(a)
    assert payload["states"] == 4
    assert payload["conflicts"] == [list(c) for c in build_slr_table(g2()).conflict_cells()]


@pytest.mark.parametrize("text", [G1_TEXT, G2_TEXT, G3_TEXT])
def test_fixture_tables_match_reference(text):
    assert_tables_match(parse_grammar(text))


def test_random_cfg_table_matches_reference():
    assert_tables_match(random_cfg())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_random_grammar_tables_match_reference(seed):
    assert_tables_match(parse_grammar(random_grammar_text(random.Random(seed), n_rules=12)))


@pytest.mark.parametrize("text", [G1_TEXT, G2_TEXT, G3_TEXT])
def test_follow_matches_reference(text):
    g = parse_grammar(text)
    rules = [(r.head.name, tuple(s.name for s in r.rhs)) for r in g.rules]
    ref = ref_follow(rules, g.start.name, None)
    assert {s.name: f for s, f in follow_sets(g).items() if not s.is_terminal} == ref


def test_epsilon_heavy_grammar_matches_reference():
    g = parse_grammar("S -> A B C\nA ->\nA -> a\nB -> A\nB -> b\nC -> B c\nC ->\n")
    assert_tables_match(g)
    rules = [(r.head.name, tuple(s.name for s in r.rhs)) for r in g.rules]
    assert {s.name: f for s, f in follow_sets(g).items() if not s.is_terminal} == ref_follow(rules, "S", None)


def test_shift_targets_in_range():
    t = build_slr_table(random_cfg())
    for acts in t.actions.values():
        for a in acts:
            if isinstance(a, Shift):
                assert 0 <= a.state < t.state_count
    accepts = [k for k, acts in t.actions.items() if any(isinstance(a, Accept) for a in acts)]
    assert accepts and all(sym == END for _, sym in accepts)
