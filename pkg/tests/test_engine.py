import random

import pytest
from hypothesis import given, settings, strategies as st

from glrlattice import oracle
from glrlattice.engine import (
    Engine,
    FifoStrategy,
    LifoStrategy,
    ParseConfig,
    RandomStrategy,
    run,
)
from glrlattice.fixtures import G3_LATTICES, chain_lattice_text, g1, g2, g3
from glrlattice.grammar import Reduce, build_slr_table, parse_grammar
from glrlattice.gss import (
    NewHypoAction,
    SearchAction,
    ShiftAction,
    forest_dump,
    gss_keys,
    node_trees,
    node_yields,
    validate_forest,
)
from glrlattice.lattice import WordHypothesis, parse_lattice
from glrlattice.synth import random_cfg, random_instance

G1_LAT = "0 5 dog -50.0\n5 9 barks -40.0\n"


def fresh(g, lattice_text="", strategy=None):
    e = Engine(g, build_slr_table(g), parse_lattice(lattice_text), strategy or LifoStrategy())
    v0, _ = e.state.find_or_create_vertex(0, 0)
    e.initial_vertex = v0
    return e


def test_new_hypo_creates_node_and_one_shift():
    e = fresh(g1())
    h = WordHypothesis(0, 5, "dog", -50.0)
    e.exec_new_hypo(h)
    node = e.state.forest["n", 0, 5]
    assert list(node.hypotheses) == [h]
    (shift,) = e.strategy.stack
    assert isinstance(shift, ShiftAction)
    assert shift.vertex is e.initial_vertex and shift.node is node and shift.time == 5
    e.exec_new_hypo(h)
    assert len(e.strategy.stack) == 1
    assert e.stats["agenda.duplicates"] == 1
    assert len(node.hypotheses) == 1


def test_new_hypo_unknown_word_only_records():
    e = fresh(g1())
    h = WordHypothesis(3, 7, "zzz", -10.0)
    e.exec_new_hypo(h)
    assert not e.state.forest and not e.strategy.stack
    assert list(e.state.old_hypos) == [h]


def test_shift_new_vertex_enqueues_sentinel_search():
    g = g1()
    e = fresh(g)
    e.exec_new_hypo(WordHypothesis(0, 5, "dog", -50.0))
    shift = e.strategy.stack.pop()
    e.exec_shift(shift)
    assert e.stats["branch.shift.4"] == 1
    v = e.state.vertices[5, shift.state]
    (search,) = e.strategy.stack
    assert isinstance(search, SearchAction)
    assert search.link.is_sentinel and search.seq == () and search.ending_time == 5
    assert str(g.rules[search.rule]) == "NP -> n"
    assert Reduce(search.rule) in e.table.lookup(v.state, "v")


def test_repeated_shift_is_a_no_op():
    e = fresh(g1())
    e.exec_new_hypo(WordHypothesis(0, 5, "dog", -50.0))
    shift = e.strategy.stack.pop()
    e.exec_shift(shift)
    before = (gss_keys(e.state), list(e.strategy.stack))
    e.exec_shift(shift)
    assert e.stats["branch.shift.2"] == 1
    assert (gss_keys(e.state), list(e.strategy.stack)) == before


def test_epsilon_search_completes_immediately():
    g = g3()
    e = fresh(g)
    e.state.find_or_create_vertex(3, 0)
    v, _ = e.state.find_or_create_vertex(3, 0)
    e._open_vertex(v)
    (search,) = [a for a in e.strategy.stack if isinstance(a, SearchAction)]
    e.strategy.stack.clear()
    e.exec_search(search)
    node = e.state.forest["A", 3, 3]
    assert list(node.seqs) == [()]
    (shift,) = e.strategy.stack
    assert shift.vertex is v and shift.node is node
    assert shift.state == e.table.shift(0, "A")


def test_search_walks_left_and_completes_root():
    g = g1()
    res = run(g, build_slr_table(g), parse_lattice(G1_LAT))
    assert res.accepted
    assert [n.key for n in res.root_nodes] == [("S", 0, 9)]
    assert res.stats["branch.search.3"] >= 1
    assert node_trees(res.root_nodes[0]) == {"(S (NP (n dog)) (VP (v barks)))"}


def test_completed_search_into_existing_node_adds_sequence_only():
    g = g2()
    e = Engine(g, build_slr_table(g), parse_lattice(chain_lattice_text("a", 3)), FifoStrategy())
    res = e.run()
    root = res.forest["S", 0, 3]
    completed = [
        (key, link) for link in res.state.links() for key, built in link.searches.items()
        if built is root
    ]
    key, link = completed[0]
    rule, seq, et = key
    before = (len(e.seen), gss_keys(e.state))
    e.exec_search(SearchAction(rule, seq, link, et))
    assert (len(e.seen), gss_keys(e.state)) == before
    assert len(root.seqs) == 2


def test_empty_lattice():
    g = g1()
    res = run(g, build_slr_table(g), parse_lattice(""))
    assert not res.accepted and res.stats["nodes"] == 0


def test_g2_three_words_two_trees_under_every_order():
    g = g2()
    table = build_slr_table(g)
    lat = parse_lattice(chain_lattice_text("a", 3))
    dumps = set()
    for strategy in [LifoStrategy(), FifoStrategy()] + [RandomStrategy(s) for s in range(25)]:
        res = run(g, table, lat, strategy=strategy)
        assert len(node_trees(res.root_nodes[0])) == 2
        assert len(res.root_nodes[0].seqs) == 2
        dumps.add(forest_dump(res.forest))
    assert len(dumps) == 1


def test_late_shift_replays_completed_search():
    # Hypotheses are offered in an order that makes a completed reduction
    # precede the arrival of a second predecessor on the same link.
    g = g2()
    table = build_slr_table(g)
    lat = parse_lattice(chain_lattice_text("a", 3))
    hits = 0
    for seed in range(40):
        res = run(g, table, lat, strategy=RandomStrategy(seed))
        hits += res.stats.get("branch.shift.2", 0) > 0
        assert len(res.root_nodes[0].seqs) == 2
    assert hits > 0


@pytest.mark.parametrize("name", sorted(G3_LATTICES))
def test_g3_matches_oracle(name):
    g = g3()
    lat = parse_lattice(G3_LATTICES[name])
    res = run(g, build_slr_table(g), lat)
    expected = oracle.grammatical_paths(g, lat)
    got = set().union(*(node_yields(r) for r in res.root_nodes)) if res.root_nodes else set()
    assert got == set(expected)
    if name == "b":
        assert ("A", 0, 0) in res.forest


def test_stop_at_accept_and_budget():
    g = g2()
    table = build_slr_table(g)
    lat = parse_lattice(chain_lattice_text("a", 6))
    full = run(g, table, lat)
    early = run(g, table, lat, config=ParseConfig(stop_at_accept=True))
    assert early.accepted and early.stats["actions.total"] <= full.stats["actions.total"]
    capped = run(g, table, lat, config=ParseConfig(max_actions=5))
    assert capped.budget_exhausted and not capped.accepted
    assert capped.stats["actions.total"] == 5


def test_unreachable_final_time_rejects():
    g = g1()
    res = run(g, build_slr_table(g), parse_lattice("0 5 dog -1\n6 9 barks -1\n"))
    assert not res.accepted and res.root_nodes == []


def test_negative_lambda_rejected():
    with pytest.raises(ValueError):
        ParseConfig(lam=-1)


def test_ambiguous_lexicon_and_left_recursion():
    g = parse_grammar(
        "S -> NP VP\nNP -> NP PP\nNP -> n\nNP -> det n\nVP -> v NP\nVP -> VP PP\n"
        "PP -> p NP\nlex n man\nlex n saw\nlex v saw\nlex det the\nlex p with\nlex n telescope\n"
    )
    words = "man saw the man with the telescope".split()
    lat = parse_lattice("".join(f"{i} {i + 1} {w} -1\n" for i, w in enumerate(words)))
    res = run(g, build_slr_table(g), lat)
    trees = node_trees(res.root_nodes[0])
    assert trees == oracle.path_trees(g, tuple(lat))
    assert len(trees) == 2


POOL = [g1(), g2(), g3(), random_cfg()]
TABLES = [build_slr_table(g) for g in POOL]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 3), st.integers(0, 2**31))
def test_random_instances_agree_with_oracle(k, seed):
    g, table = POOL[k], TABLES[k]
    lat, _ = random_instance(g, random.Random(seed), max_hyps=8, max_frames=6)
    res = run(g, table, lat)
    validate_forest(res.forest, g.rules)
    got = set()
    if res.root_nodes:
        got = node_yields(res.root_nodes[0])
    expected = oracle.grammatical_paths(g, lat)
    assert got == set(expected)
    if res.root_nodes and k < 3:
        trees = node_trees(res.root_nodes[0])
        assert trees == set().union(*expected.values())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 3), st.integers(0, 2**31), st.integers(0, 2**31))
def test_forest_independent_of_order(k, seed, order_seed):
    g, table = POOL[k], TABLES[k]
    lat, _ = random_instance(g, random.Random(seed), max_hyps=8, max_frames=6)
    a = run(g, table, lat)
    b = run(g, table, lat, strategy=RandomStrategy(order_seed))
    c = run(g, table, lat, strategy=FifoStrategy())
    assert forest_dump(a.forest) == forest_dump(b.forest) == forest_dump(c.forest)
    assert gss_keys(a.state) == gss_keys(b.state) == gss_keys(c.state)


def test_only_known_stat_keys():
    g = g3()
    res = run(g, build_slr_table(g), parse_lattice(G3_LATTICES["a|b b"]))
    branches = {k for k in res.stats if k.startswith("branch.")}
    assert branches <= {"branch.shift.2", "branch.shift.3", "branch.shift.4", "branch.search.2", "branch.search.3"}
    assert res.stats["actions.total"] == (
        res.stats["actions.shift"] + res.stats["actions.search"] + res.stats["actions.newhypo"]
    )
