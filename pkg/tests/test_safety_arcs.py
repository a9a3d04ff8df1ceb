from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dag, items, st_dags
from definitions import definitional_maximal
from safeseq.graph_core import compress_arcs
from safeseq.safety_arcs import (
    arc_dominator_trees,
    is_arc_dominator,
    maximal_safe_arc_sequences,
    maximal_safe_arc_sequences_subset,
    oracle_is_safe_arcs,
    oracle_maximal_safe_arcs,
)

SA, SB, AT, BT = range(4)


@st.composite
def multigraph_and_arcs(draw, max_n=7):
    g = draw(st_dags(max_n=max_n, parallel=4))
    c = draw(st.sets(st.integers(0, g.m - 1)))
    return g, sorted(c)


def test_path():
    assert items(maximal_safe_arc_sequences(dag(3, [(0, 1), (1, 2)]))) == [(0, 1)]


def test_sequence_may_stop_short_of_sink():
    g = dag(5, [(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)])
    assert (0, 2) in maximal_safe_arc_sequences(g).as_set()


def test_diamond(diamond):
    assert items(maximal_safe_arc_sequences(diamond)) == [(SA, AT), (SB, BT)]
    assert oracle_maximal_safe_arcs(diamond).as_set() == {(SA, AT), (SB, BT)}


def test_parallel_pair():
    g = dag(2, [(0, 1), (0, 1)])
    assert maximal_safe_arc_sequences(g).as_set() == {(0,), (1,)}
    assert oracle_maximal_safe_arcs(g).as_set() == {(0,), (1,)}


def test_is_arc_dominator_examples(diamond):
    p = dag(3, [(0, 1), (1, 2)])
    assert is_arc_dominator(p, 0, "s")
    assert is_arc_dominator(diamond, SA, "s")
    assert not is_arc_dominator(diamond, AT, "s")
    assert is_arc_dominator(diamond, AT, "t")


def test_subset_examples(diamond):
    assert maximal_safe_arc_sequences_subset(diamond, [SA]).as_set() == {(SA, AT)}
    assert maximal_safe_arc_sequences_subset(diamond, []).as_set() == set()
    assert items(maximal_safe_arc_sequences_subset(diamond, range(4))) == items(maximal_safe_arc_sequences(diamond))


def check_shape(g, seqs):
    # unlike node sequences, arc sequences need not touch s or t:
    # with s->a, s->b, a->b, b->c, b->t, c->t the arc sa extends only to ab
    reach = _reachability(g)
    for x in seqs:
        for a, b in zip(x, x[1:]):
            assert g.tail(b) in reach[g.head(a)]


def _reachability(g):
    reach = {v: {v} for v in range(g.n)}
    for v in reversed(g.topo_order):
        for w in g.graph.successors[v]:
            reach[v] |= reach[w]
    return reach


@settings(max_examples=400, deadline=None)
@given(st_dags(max_n=8, parallel=4))
def test_against_oracle(g):
    out = maximal_safe_arc_sequences(g)
    assert items(out) == items(oracle_maximal_safe_arcs(g))
    assert len(set(items(out))) == len(out)
    check_shape(g, items(out))
    for x in items(out):
        assert oracle_is_safe_arcs(g, x)


@settings(max_examples=150, deadline=None)
@given(st_dags(max_n=6, parallel=3))
def test_against_definition(g):
    expected = definitional_maximal(g, arcs=True)
    if expected is not None:
        assert maximal_safe_arc_sequences(g).as_set() == expected


@settings(max_examples=300, deadline=None)
@given(multigraph_and_arcs())
def test_subset_against_oracle(gc):
    g, c = gc
    out = maximal_safe_arc_sequences_subset(g, c)
    assert items(out) == items(oracle_maximal_safe_arcs(g, candidates=c))
    for x in items(out):
        assert oracle_is_safe_arcs(g, x, c)


@settings(max_examples=150, deadline=None)
@given(multigraph_and_arcs(max_n=6))
def test_subset_against_definition(gc):
    g, c = gc
    expected = definitional_maximal(g, c, arcs=True)
    if expected is not None:
        assert maximal_safe_arc_sequences_subset(g, c).as_set() == expected


@settings(max_examples=200, deadline=None)
@given(st_dags(max_n=8, parallel=4))
def test_full_subset_equals_full(g):
    assert items(maximal_safe_arc_sequences_subset(g, range(g.m))) == items(maximal_safe_arc_sequences(g))


@settings(max_examples=200, deadline=None)
@given(st_dags(max_n=8, parallel=4))
def test_arc_dominator_matches_tree(g):
    s_tree, t_tree = arc_dominator_trees(g)
    # the abstract endpoints (ids m and m+1) are not arcs of g
    for a in range(g.m):
        assert is_arc_dominator(g, a, "s") == any(c < g.m for c in s_tree.children[a])
        assert is_arc_dominator(g, a, "t") == any(c < g.m for c in t_tree.children[a])


@settings(max_examples=150, deadline=None)
@given(st_dags(max_n=8, parallel=4))
def test_arc_compression_transparency(g):
    h, amap = compress_arcs(g)
    on_h = {tuple(amap.expand_sequence(x)) for x in items(maximal_safe_arc_sequences(h))}
    assert on_h == maximal_safe_arc_sequences(g).as_set()
