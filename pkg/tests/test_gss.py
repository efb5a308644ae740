import json

import pytest

from glrlattice.engine import run
from glrlattice.fixtures import chain_lattice_text, g1, g2, g3
from glrlattice.grammar import build_slr_table
from glrlattice.gss import (
    ForestError,
    GssState,
    Link,
    Node,
    forest_dump,
    gss_keys,
    node_trees,
    node_yields,
    validate_forest,
)
from glrlattice.lattice import WordHypothesis, parse_lattice


def test_vertex_uniqueness():
    st = GssState()
    v, created = st.find_or_create_vertex(0, 0)
    assert created
    again, created = st.find_or_create_vertex(0, 0)
    assert again is v and not created
    a, _ = st.find_or_create_vertex(5, 2)
    b, _ = st.find_or_create_vertex(5, 3)
    assert a is not b
    assert [x.state for x in st.by_time[5]] == [2, 3]


def test_terminal_node_packs_hypotheses():
    g = g1()
    n = g.symbol("n")
    st = GssState()
    node, created = st.find_or_create_node(n, 0, 5)
    assert created
    st.add_hypothesis(node, WordHypothesis(0, 5, "dog", -50.0))
    same, created = st.find_or_create_node(n, 0, 5)
    assert same is node and not created
    st.add_hypothesis(same, WordHypothesis(0, 5, "fog", -60.0))
    assert len(node.hypotheses) == 2


def test_epsilon_node_has_one_empty_sequence():
    g = g3()
    st = GssState()
    node, _ = st.find_or_create_node(g.symbol("A"), 3, 3)
    assert st.add_seq(node, ())
    assert not st.add_seq(node, ())
    assert list(node.seqs) == [()]
    validate_forest(st.forest, g.rules)
    assert node_trees(node) == {"(A)"}


def test_bad_node_spans():
    g = g1()
    st = GssState()
    with pytest.raises(ForestError):
        st.find_or_create_node(g.symbol("n"), 4, 4)
    with pytest.raises(ForestError):
        st.find_or_create_node(g.symbol("S"), 5, 4)


def test_root_packs_two_sequences_for_three_words():
    g = g2()
    res = run(g, build_slr_table(g), parse_lattice(chain_lattice_text("a", 3)))
    root = res.forest["S", 0, 3]
    assert len(root.seqs) == 2
    assert node_trees(root) == {
        "(S (S (S (a a)) (S (a a))) (S (a a)))",
        "(S (S (a a)) (S (S (a a)) (S (a a))))",
    }


def test_links_and_preds_respect_times():
    g = g2()
    res = run(g, build_slr_table(g), parse_lattice(chain_lattice_text("a", 5)))
    seen = set()
    for link in res.state.links():
        assert not link.is_sentinel
        assert link.owner.time == link.node.end
        assert all(p.time == link.node.start for p in link.preds)
        assert (link.owner.key, link.node.key) not in seen
        seen.add((link.owner.key, link.node.key))
    validate_forest(res.forest, g.rules)


def test_sentinel_link_reports_its_vertex_time():
    st = GssState()
    v, _ = st.find_or_create_vertex(3, 1)
    s = Link(None, None, v)
    assert s.is_sentinel and s.left_time == 3


def test_validate_forest_catches_gaps():
    g = g1()
    st = GssState()
    n, _ = st.find_or_create_node(g.symbol("n"), 0, 5)
    st.add_hypothesis(n, WordHypothesis(0, 5, "dog", -1.0))
    v, _ = st.find_or_create_node(g.symbol("v"), 6, 9)
    st.add_hypothesis(v, WordHypothesis(6, 9, "barks", -1.0))
    np_, _ = st.find_or_create_node(g.symbol("NP"), 0, 5)
    st.add_seq(np_, (n,))
    vp, _ = st.find_or_create_node(g.symbol("VP"), 6, 9)
    st.add_seq(vp, (v,))
    s, _ = st.find_or_create_node(g.symbol("S"), 0, 9)
    st.add_seq(s, (np_, vp))
    with pytest.raises(ForestError):
        validate_forest(st.forest)


def test_validate_forest_checks_rules():
    g = g1()
    st = GssState()
    n, _ = st.find_or_create_node(g.symbol("n"), 0, 5)
    st.add_hypothesis(n, WordHypothesis(0, 5, "dog", -1.0))
    vp, _ = st.find_or_create_node(g.symbol("VP"), 0, 5)
    st.add_seq(vp, (n,))
    validate_forest(st.forest)
    with pytest.raises(ForestError):
        validate_forest(st.forest, g.rules)


def test_forest_dump_is_canonical_json():
    g = g1()
    res = run(g, build_slr_table(g), parse_lattice("0 5 dog -50.0\n5 9 barks -40.0\n"))
    payload = json.loads(forest_dump(res.forest))
    assert payload["S:0:9"] == {"alternatives": [["NP:0:5", "VP:5:9"]]}
    assert payload["n:0:5"] == {"hypotheses": [[0, 5, "dog", -50.0]]}
    assert sorted(payload) == sorted(n.label for n in res.forest.values())


def test_yields_of_root():
    g = g1()
    lat = parse_lattice("0 5 dog -50.0\n5 9 barks -40.0\n")
    res = run(g, build_slr_table(g), lat)
    assert node_yields(res.root_nodes[0]) == {tuple(lat)}


def test_gss_keys_sorted():
    g = g2()
    res = run(g, build_slr_table(g), parse_lattice(chain_lattice_text("a", 3)))
    vertices, links = gss_keys(res.state)
    assert vertices == sorted(vertices)
    assert len(links) == res.stats["links"]
