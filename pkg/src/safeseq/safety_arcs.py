"""Maximal safe sequences of arcs for path covers of the arcs.

Arc-dominance is node-dominance in the line graph, so everything here runs
the node machinery on the augmented line graph (see
:func:`graph_core.line_graph`) and strips its abstract endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

from .dominators import DominatorTree, build_dominator_tree
from .graph_core import ArcCompressionMap, StDag, all_st_paths, compress_arcs, line_graph
from .safety_nodes import (
    SafeSequence,
    SafeSequenceSet,
    is_subsequence,
    maximal_safe_sequences,
    remove_non_maximal,
)
from .safety_subset import maximal_safe_sequences_subset


@dataclass(frozen=True)
class ArcSafetyRepresentation:
    """Arc-dominator trees stored as the two parent arrays over the line
    nodes of the arc-compressed graph (last two entries are the abstract
    endpoints)."""

    compressed: StDag
    amap: ArcCompressionMap
    s_parent: tuple[int, ...]
    t_parent: tuple[int, ...]


def _order(g: StDag, seqs) -> tuple[SafeSequence, ...]:
    rank = g.rank
    return tuple(sorted(seqs, key=lambda s: [(rank[g.tail(a)], rank[g.head(a)], a) for a in s.items]))


def arc_dominator_trees(g: StDag) -> tuple[DominatorTree, DominatorTree]:
    """s- and t-arc-dominator trees of ``g`` as trees over its line nodes;
    node ``m`` / ``m + 1`` are the abstract roots."""
    lg = line_graph(g)
    return build_dominator_tree(lg, "s"), build_dominator_tree(lg, "t")


def maximal_safe_arc_sequences(g: StDag) -> SafeSequenceSet:
    """Arc-compress, run node safety on the augmented line graph, drop the
    abstract endpoints, expand compressed arcs back to original ArcIds."""
    h, amap = compress_arcs(g)
    lg = line_graph(h)
    endpoints = (lg.source, lg.sink)
    node_result = maximal_safe_sequences(lg)
    groups = node_result.representation.cmap
    seqs = []
    for seq in node_result:
        items: list[int] = []
        for a in seq.items:
            if a not in endpoints:
                items.extend(amap.expand[a])
        # the anchor's unitary run can start at the abstract source
        anchor = next(a for a in groups.expand[groups.forward[seq.anchor]] if a not in endpoints)
        seqs.append(SafeSequence(tuple(items), amap.expand[anchor][0]))
    s_tree, t_tree = arc_dominator_trees(h)
    rep = ArcSafetyRepresentation(h, amap, s_tree.parent, t_tree.parent)
    return SafeSequenceSet(_order(g, seqs), rep)


def maximal_safe_arc_sequences_subset(g: StDag, c: Iterable[int]) -> SafeSequenceSet:
    """Only the arcs in ``c`` have to be covered."""
    c = set(c)
    if not c:
        return SafeSequenceSet(())
    lg = line_graph(g)
    endpoints = (lg.source, lg.sink)
    result = maximal_safe_sequences_subset(lg, c)
    seqs = [SafeSequence(tuple(a for a in s.items if a not in endpoints), s.anchor) for s in result]
    return SafeSequenceSet(_order(g, seqs), result.representation)


def is_arc_dominator(g: StDag, arc: int, direction: Literal["s", "t"] = "s") -> bool:
    """``uv`` s-dominates another arc iff v has indegree 1 and outdegree >= 1;
    symmetrically for t with u."""
    u, v = g.tail(arc), g.head(arc)
    ins, outs = g.graph.in_arcs, g.graph.out_arcs
    if direction == "s":
        return len(ins[v]) == 1 and len(outs[v]) >= 1
    return len(outs[u]) == 1 and len(ins[u]) >= 1


# --------------------------------------------------------------------------
# brute-force oracles


def _reaches_without_arc(g: StDag, u: int, v: int, banned: int) -> bool:
    seen = {u}
    stack = [u]
    while stack:
        x = stack.pop()
        if x == v:
            return True
        for a in g.graph.out_arcs[x]:
            if a == banned:
                continue
            y = g.head(a)
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return False


def bridges_bruteforce(g: StDag, u: int, v: int) -> list[int]:
    """Arcs lying on every u-v path, in path order (empty when u == v)."""
    bridges = [a for a in range(g.m) if not _reaches_without_arc(g, u, v, a)]
    rank = g.rank
    return sorted(bridges, key=lambda a: rank[g.tail(a)])


def oracle_arc_extension(g: StDag, a: int) -> tuple[int, ...]:
    return tuple(bridges_bruteforce(g, g.source, g.tail(a)) + [a] + bridges_bruteforce(g, g.head(a), g.sink))


def oracle_maximal_safe_arcs(g: StDag, candidates: Iterable[int] | None = None) -> SafeSequenceSet:
    arcs = range(g.m) if candidates is None else sorted(set(candidates))
    exts = {}
    for a in arcs:
        exts.setdefault(oracle_arc_extension(g, a), a)
    kept = remove_non_maximal(list(exts))
    return SafeSequenceSet(_order(g, [SafeSequence(x, exts[x]) for x in kept]))


def oracle_is_safe_arcs(g: StDag, seq, c: Iterable[int] | None = None, limit: int | None = None) -> bool:
    """Some arc (of ``c``, default all) has every s-t path through it
    containing ``seq``; paths are compared as ArcId sequences."""
    paths = all_st_paths(g, limit, arcs=True)
    arcs = range(g.m) if c is None else set(c)
    for a in arcs:
        through = [p for p in paths if a in p]
        if through and all(is_subsequence(seq, p) for p in through):
            return True
    return False
