import pytest
from hypothesis import given, settings

from conftest import A, B, S, T, dag, st_dags
from safeseq.graph_core import (
    CycleDetected,
    DiGraph,
    GraphError,
    MultipleSinks,
    MultipleSources,
    PathExplosion,
    UnreachableNode,
    all_st_paths,
    as_st_dag,
    compress_arcs,
    compress_nodes,
    line_graph,
    normalize_to_st_dag,
    validate_st_dag,
)


def test_normalize_single_node():
    g = normalize_to_st_dag(DiGraph.from_arcs(1, []), starts=[0], ends=[0])
    assert g.n == 3 and g.m == 2
    assert set((u, v) for u, v, _ in g.arcs) == {(1, 0), (0, 2)}
    assert (g.source, g.sink) == (1, 2)
    assert g.synthetic_arcs == {0, 1}


def test_normalize_two_starts():
    # a=0, b=1, c=2
    g = normalize_to_st_dag(DiGraph.from_arcs(3, [(0, 2, 1), (1, 2, 1)]), starts=[0, 1], ends=[2])
    s, t = g.source, g.sink
    assert [(u, v) for u, v, _ in g.arcs] == [(0, 2), (1, 2), (s, 0), (s, 1), (2, t)]
    assert all(g.weight(a) == 0 for a in g.synthetic_arcs)
    assert g.data_arcs == [0, 1]


def test_normalize_unreachable_node():
    # node 2 feeds 1 but only 0 is a start
    g = DiGraph.from_arcs(3, [(0, 1, 1), (2, 1, 1)])
    with pytest.raises(UnreachableNode) as err:
        normalize_to_st_dag(g, starts=[0], ends=[1])
    assert err.value.node == 2


def test_normalize_weights_and_cycle():
    g = normalize_to_st_dag(DiGraph.from_arcs(2, [(0, 1, 4)]), start_weights={0: 9})
    assert g.weight(1) == 9
    with pytest.raises(CycleDetected):
        normalize_to_st_dag(DiGraph.from_arcs(2, [(0, 1, 1), (1, 0, 1)]))


def test_validate_path():
    g = dag(3, [(0, 1, 1), (1, 2, 1)])
    assert g.topo_order == (0, 1, 2)


def test_validate_dangling_node_is_named():
    # s -> a, s -> t; a has no out-arc
    with pytest.raises((MultipleSinks, UnreachableNode)) as err:
        validate_st_dag(DiGraph.from_arcs(3, [(0, 1, 1), (0, 2, 1)]), 0, 2)
    assert err.value.node == 1


def test_validate_cycle():
    # s=0, a=1, b=2, t=3
    with pytest.raises(CycleDetected):
        validate_st_dag(DiGraph.from_arcs(4, [(0, 1, 1), (1, 2, 1), (2, 1, 1), (1, 3, 1)]), 0, 3)


def test_validate_second_source():
    with pytest.raises(MultipleSources) as err:
        validate_st_dag(DiGraph.from_arcs(3, [(0, 2, 1), (1, 2, 1)]), 0, 2)
    assert err.value.node == 1


def test_bad_arcs_rejected():
    with pytest.raises(GraphError):
        DiGraph.from_arcs(2, [(0, 5, 1)])
    with pytest.raises(GraphError):
        DiGraph.from_arcs(2, [(0, 1, -1)])


def test_as_st_dag_keeps_unique_endpoints(diamond):
    g = as_st_dag(diamond.graph)
    assert (g.source, g.sink) == (S, T) and not g.synthetic_arcs


def test_compress_whole_path(path_graph):
    h, cmap = compress_nodes(path_graph)
    assert h.n == 1 and h.m == 0 and h.source == h.sink == 0
    assert cmap.expand == ((S, A, B, T),)


def test_compress_diamond_unchanged(diamond):
    h, cmap = compress_nodes(diamond)
    assert h.n == 4 and h.m == 4
    assert sorted(cmap.expand) == [(v,) for v in range(4)]


def test_compress_inner_unitary_run():
    # s -> x, s -> c, x -> c, c -> d -> e, e -> y, e -> t, y -> t
    s, x, c, d, e, y, t = range(7)
    g = dag(7, [(s, x), (s, c), (x, c), (c, d), (d, e), (e, y), (e, t), (y, t)])
    h, cmap = compress_nodes(g)
    assert (c, d, e) in cmap.expand
    assert h.n == 5


def no_contractible_arc(h):
    succ, pred = h.graph.successors, h.graph.predecessors
    return not any(succ[u] == [v] and pred[v] == [u] for u in range(h.n) for v in succ[u])


@settings(max_examples=150, deadline=None)
@given(st_dags(parallel=3))
def test_compress_nodes_properties(g):
    h, cmap = compress_nodes(g)
    assert no_contractible_arc(h)
    assert sorted(v for grp in cmap.expand for v in grp) == list(range(g.n))
    assert all(cmap.forward[v] == c for c, grp in enumerate(cmap.expand) for v in grp)
    # idempotent up to relabeling
    h2, cmap2 = compress_nodes(h)
    assert h2.n == h.n and h2.m == h.m
    # paths correspond one to one after expansion
    orig = set(all_st_paths(g))
    mapped = {tuple(cmap.expand_sequence(p)) for p in all_st_paths(h)}
    assert mapped == orig


def test_compress_arcs_examples():
    h, amap = compress_arcs(dag(3, [(0, 1, 1), (1, 2, 1)]))
    assert h.n == 2 and [(u, v) for u, v, _ in h.arcs] == [(0, 1)]
    assert amap.expand == ((0, 1),)
    h, amap = compress_arcs(dag(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)]))
    assert [(u, v) for u, v, _ in h.arcs] == [(0, 1), (0, 1)]
    assert sorted(amap.expand) == [(0, 1), (2,)]


def test_compress_arcs_diamond_becomes_parallel_pair(diamond):
    # a and b have indegree and outdegree 1, so each side collapses
    h, amap = compress_arcs(diamond)
    assert h.n == 2 and [(u, v) for u, v, _ in h.arcs] == [(0, 1), (0, 1)]
    assert amap.expand == ((0, 2), (1, 3))


def test_compress_arcs_keeps_branching_graph():
    # s -> a, s -> b, a -> t, b -> t, a -> b: no node has in = out = 1
    g = dag(4, [(S, A), (S, B), (A, T), (B, T), (A, B)])
    h, amap = compress_arcs(g)
    assert h.n == 4 and h.m == 5


@settings(max_examples=150, deadline=None)
@given(st_dags(parallel=3))
def test_compress_arcs_properties(g):
    h, amap = compress_arcs(g)
    ins, outs = h.graph.in_arcs, h.graph.out_arcs
    assert not any(len(ins[v]) == 1 and len(outs[v]) == 1 for v in range(h.n))
    assert sorted(a for grp in amap.expand for a in grp) == list(range(g.m))
    for grp in amap.expand:
        assert all(g.head(a) == g.tail(b) for a, b in zip(grp, grp[1:]))
    mapped = {tuple(amap.expand_sequence(p)) for p in all_st_paths(h, arcs=True)}
    assert mapped == set(all_st_paths(g, arcs=True))


def line_arcs(lg):
    return sorted((u, v) for u, v, _ in lg.arcs)


def test_line_graph_path():
    lg = line_graph(dag(3, [(0, 1), (1, 2)]))
    S_, T_ = 2, 3
    assert lg.n == 4
    assert line_arcs(lg) == sorted([(S_, 0), (0, 1), (1, T_)])


def test_line_graph_diamond(diamond):
    lg = line_graph(diamond)
    inner = [(u, v) for u, v in line_arcs(lg) if u < 4 and v < 4]
    assert inner == [(0, 2), (1, 3)]


def test_line_graph_with_chord():
    # s -> a, s -> b, a -> t, b -> t, a -> b; arc ids 0..4
    g = dag(4, [(S, A), (S, B), (A, T), (B, T), (A, B)])
    lg = line_graph(g)
    inner = [(u, v) for u, v in line_arcs(lg) if u < 5 and v < 5]
    sa, sb, at, bt, ab = range(5)
    assert inner == sorted([(sa, at), (sa, ab), (ab, bt), (sb, bt)])


@settings(max_examples=100, deadline=None)
@given(st_dags(parallel=3))
def test_line_graph_counts(g):
    lg = line_graph(g)
    inner = [(u, v) for u, v, _ in lg.arcs if u < g.m and v < g.m]
    two_arc_paths = sum(len(g.graph.out_arcs[g.head(a)]) for a in range(g.m))
    assert lg.n == g.m + 2 and len(inner) == two_arc_paths


def test_all_st_paths_examples(path_graph, diamond):
    assert all_st_paths(path_graph) == [(S, A, B, T)]
    assert all_st_paths(diamond) == [(S, A, T), (S, B, T)]
    d = 5
    arcs = []
    for i in range(d):
        base = 3 * i
        arcs += [(base, base + 1), (base, base + 2), (base + 1, base + 3), (base + 2, base + 3)]
    chain = dag(3 * d + 1, arcs)
    assert len(all_st_paths(chain)) == 2**d
    with pytest.raises(PathExplosion):
        all_st_paths(chain, limit=2**d - 1)


def test_all_st_paths_parallel_arcs():
    g = dag(2, [(0, 1), (0, 1)])
    assert all_st_paths(g) == [(0, 1)]
    assert all_st_paths(g, arcs=True) == [(0,), (1,)]


def test_path_limit_env(monkeypatch, diamond):
    monkeypatch.setenv("SAFESEQ_PATH_LIMIT", "1")
    with pytest.raises(PathExplosion):
        all_st_paths(diamond)


def test_validate_accepts_exactly_covered_graphs(small_exhaustive):
    # every harness graph validates, and its paths cover every node
    for g in small_exhaustive[:400]:
        assert set().union(*map(set, all_st_paths(g))) == set(range(g.n))
