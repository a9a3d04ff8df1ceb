"""Structural dominator properties, checked with brute-force reachability.

Each check returns a list of counterexamples (empty when the property
holds) so the acceptance run can count them across a whole harness.
"""

from safeseq.dominators import build_dominator_tree, cutnodes_bruteforce
from safeseq.graph_core import compress_arcs, compress_nodes
from safeseq.safety_arcs import arc_dominator_trees


def _dominators(g):
    """(s-dominators, t-dominators) of every node, both inclusive."""
    s_dom = [set(cutnodes_bruteforce(g, g.source, v)) for v in range(g.n)]
    t_dom = [set(cutnodes_bruteforce(g, v, g.sink)) for v in range(g.n)]
    return s_dom, t_dom


def tree_vs_bruteforce(g, doms=None):
    s_tree, t_tree = build_dominator_tree(g, "s"), build_dominator_tree(g, "t")
    s_dom, t_dom = doms or _dominators(g)
    bad = []
    for v in range(g.n):
        if s_tree.ancestors(v) != s_dom[v]:
            bad.append(("s", v))
        if t_tree.ancestors(v) != t_dom[v]:
            bad.append(("t", v))
    return bad


def kth_ancestor_transfer(g, doms=None):
    """u k-th s-ancestor of v  =>  dom_k(t-tree, u, k) t-dominates v, and v
    t-dominates u only when v is that node."""
    s_tree, t_tree = build_dominator_tree(g, "s"), build_dominator_tree(g, "t")
    _, t_dom = doms or _dominators(g)
    bad = []
    for v in range(g.n):
        u = v
        for k in range(1, s_tree.depth[v] + 1):
            u = s_tree.parent[u]
            w = t_tree.dom_k(u, k)
            if w not in t_dom[v] or (v != w and v in t_dom[u]):
                bad.append((u, v, k))
    return bad


def dominated_beyond(g, doms=None):
    """u s-dominates v, v does not t-dominate u  =>  every node t-dominated
    by v is strictly s-dominated by u."""
    s_dom, t_dom = doms or _dominators(g)
    bad = []
    for v in range(g.n):
        for u in s_dom[v]:
            if v in t_dom[u]:
                continue
            for w in range(g.n):
                if v in t_dom[w] and (u == w or u not in s_dom[w]):
                    bad.append((u, v, w))
    return bad


def mutual_immediate_branches(g, doms=None):
    """On the node-compressed graph: u = idom_s(v) and v = idom_t(u)  =>  both
    have another child in their tree."""
    h, _ = compress_nodes(g)
    s_tree, t_tree = build_dominator_tree(h, "s"), build_dominator_tree(h, "t")
    bad = []
    for v in range(h.n):
        u = s_tree.parent[v]
        if u < 0 or u == v or t_tree.parent[u] != v:
            continue
        if len(s_tree.children[u]) < 2 or len(t_tree.children[v]) < 2:
            bad.append((u, v))
    return bad


def _arc_reach(g, start_nodes, banned, forward=True):
    seen, stack = set(start_nodes), list(start_nodes)
    adj = g.graph.out_arcs if forward else g.graph.in_arcs
    end = g.head if forward else g.tail
    while stack:
        x = stack.pop()
        for a in adj[x]:
            if a != banned and end(a) not in seen:
                seen.add(end(a))
                stack.append(end(a))
    return seen


def arc_dominates(g, a, b, direction):
    """Brute force: every s-path ending with b (t-path starting with b) uses a."""
    if a == b:
        return True
    if direction == "s":
        return g.tail(b) not in _arc_reach(g, [g.source], a)
    return g.head(b) not in _arc_reach(g, [g.sink], a, forward=False)


def arc_trees_vs_bruteforce(g):
    s_tree, t_tree = arc_dominator_trees(g)
    bad = []
    for b in range(g.m):
        for tree, d in ((s_tree, "s"), (t_tree, "t")):
            got = {a for a in tree.ancestors(b) if a < g.m}
            want = {a for a in range(g.m) if arc_dominates(g, a, b, d)}
            if got != want:
                bad.append((d, b))
    return bad


def arc_idom_transfer(g):
    """a = idom_s(b) among arcs  =>  idom_t(a) t-dominates b."""
    s_tree, t_tree = arc_dominator_trees(g)
    bad = []
    for b in range(g.m):
        a = s_tree.parent[b]
        if not 0 <= a < g.m:
            continue
        z = t_tree.parent[a]
        # the abstract sink of the line graph dominates everything
        if z < g.m and not arc_dominates(g, z, b, "t"):
            bad.append((a, b))
    return bad


def arc_dominator_fanout(g):
    """On the arc-compressed graph: an arc that s-dominates another arc has
    at least two children among the arcs leaving its head."""
    h, _ = compress_arcs(g)
    s_tree, _ = arc_dominator_trees(h)
    bad = []
    for a in range(h.m):
        kids = [c for c in s_tree.children[a] if c < h.m]
        if kids and sum(h.tail(c) == h.head(a) for c in kids) < 2:
            bad.append(a)
    return bad


def node_counterexamples(g):
    """Counterexample counts of every node check, sharing one brute-force
    dominator computation."""
    doms = _dominators(g)
    return {f.__name__: len(f(g, doms)) for f in ALL_NODE_CHECKS}


ALL_NODE_CHECKS = (tree_vs_bruteforce, kth_ancestor_transfer, dominated_beyond, mutual_immediate_branches)
ALL_ARC_CHECKS = (arc_trees_vs_bruteforce, arc_idom_transfer, arc_dominator_fanout)
