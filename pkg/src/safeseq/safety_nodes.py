"""Maximal safe sequences of nodes for path covers of all nodes."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .dominators import DominatorTree, build_dominator_tree, cutnodes_bruteforce, extension
from .graph_core import CompressionMap, StDag, all_st_paths, compress_nodes


@dataclass(frozen=True)
class SafeSequence:
    items: tuple[int, ...]
    # node (or arc) of the input graph whose extension produced this sequence
    anchor: int

    def __len__(self) -> int:
        return len(self.items)


@dataclass(frozen=True)
class NodeSafetyRepresentation:
    """Both dominator trees of the compressed graph plus their common leaves.

    This is the O(n) representation: every maximal safe sequence is the
    expanded extension of one entry of ``leaves``.
    """

    compressed: StDag
    cmap: CompressionMap
    s_tree: DominatorTree
    t_tree: DominatorTree
    leaves: tuple[int, ...]


@dataclass(frozen=True)
class SafeSequenceSet:
    sequences: tuple[SafeSequence, ...]
    representation: object | None = field(default=None, compare=False, repr=False)

    def __len__(self) -> int:
        return len(self.sequences)

    def __iter__(self):
        return iter(self.sequences)

    @property
    def total_length(self) -> int:
        return sum(len(s) for s in self.sequences)

    def as_set(self) -> set[tuple[int, ...]]:
        return {s.items for s in self.sequences}


def is_subsequence(x: Sequence[int], y: Sequence[int]) -> bool:
    it = iter(y)
    return all(any(a == b for b in it) for a in x)


def order_sequences(g: StDag, seqs) -> tuple[SafeSequence, ...]:
    """Lexicographic by topological rank of the nodes."""
    rank = g.rank
    return tuple(sorted(seqs, key=lambda s: [rank[v] for v in s.items]))


def node_safety_representation(g: StDag) -> NodeSafetyRepresentation:
    h, cmap = compress_nodes(g)
    s_tree = build_dominator_tree(h, "s")
    t_tree = build_dominator_tree(h, "t")
    leaves = tuple(v for v in range(h.n) if s_tree.is_leaf(v) and t_tree.is_leaf(v))
    return NodeSafetyRepresentation(h, cmap, s_tree, t_tree, leaves)


def maximal_safe_sequences(g: StDag) -> SafeSequenceSet:
    """Compress, build both dominator trees, extend every common leaf.

    Compressed node ids follow the topological rank of their first original
    node, so sorting the short compressed extensions already gives the final
    output order and expansion stays a plain copy.
    """
    rep = node_safety_representation(g)
    exts = sorted((extension(rep.s_tree, rep.t_tree, v), v) for v in rep.leaves)
    expand = rep.cmap.expand
    seqs = []
    for ext, leaf in exts:
        items: list[int] = []
        for c in ext:
            items.extend(expand[c])
        seqs.append(SafeSequence(tuple(items), expand[leaf][0]))
    return SafeSequenceSet(tuple(seqs), rep)


def cutnodes_sweep(g: StDag, u: int, v: int) -> list[int]:
    """u-v cutnodes in O(n + m).

    Restrict to nodes lying on some u-v path and walk them in topological
    order; a node is a cutnode exactly when no arc of that subgraph jumps
    over it.
    """
    succ, pred = g.graph.successors, g.graph.predecessors
    fwd = _closure(succ, u)
    bwd = _closure(pred, v)
    rank = g.rank
    inside = sorted((x for x in fwd if x in bwd), key=rank.__getitem__)
    pos = {x: i for i, x in enumerate(inside)}
    cut, reach = [], 0
    for i, x in enumerate(inside):
        if reach <= i:
            cut.append(x)
        for y in succ[x]:
            j = pos.get(y)
            if j is not None and j > reach:
                reach = j
    return cut


def _closure(adj, start) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def maximal_safe_sequences_no_domtree(g: StDag) -> SafeSequenceSet:
    """Same output as :func:`maximal_safe_sequences` without dominator trees.

    On the compressed graph, ``v`` is a leaf of both trees iff no node has
    out-neighbourhood ``{v}`` and no node has in-neighbourhood ``{v}``. Each
    such node is extended with two linear-time cutnode sweeps.
    """
    h, cmap = compress_nodes(g)
    succ, pred = h.graph.successors, h.graph.predecessors
    dominators = {ns[0] for ns in succ if len(ns) == 1} | {ns[0] for ns in pred if len(ns) == 1}
    seqs = []
    for v in range(h.n):
        if v in dominators:
            continue
        ext = cutnodes_sweep(h, h.source, v) + cutnodes_sweep(h, v, h.sink)[1:]
        seqs.append(SafeSequence(tuple(cmap.expand_sequence(ext)), cmap.expand[v][0]))
    return SafeSequenceSet(order_sequences(g, seqs))


# --------------------------------------------------------------------------
# brute-force oracles


def oracle_is_safe(g: StDag, seq: Sequence[int], limit: int | None = None) -> bool:
    """Some node ``u`` has every s-t path through it containing ``seq``."""
    paths = all_st_paths(g, limit)
    covering = [[] for _ in range(g.n)]
    for p in paths:
        for x in p:
            covering[x].append(p)
    return any(ps and all(is_subsequence(seq, p) for p in ps) for ps in covering)


def remove_non_maximal(seqs: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    uniq = list(dict.fromkeys(seqs))
    return [x for x in uniq if not any(x != y and is_subsequence(x, y) for y in uniq)]


def oracle_extension(g: StDag, v: int) -> tuple[int, ...]:
    return tuple(cutnodes_bruteforce(g, g.source, v) + cutnodes_bruteforce(g, v, g.sink)[1:])


def oracle_maximal_safe(g: StDag, candidates: Sequence[int] | None = None) -> SafeSequenceSet:
    """Extension of every candidate node (default: all) via brute-force
    cutnodes, then drop duplicates and proper subsequences."""
    nodes = range(g.n) if candidates is None else candidates
    exts = {}
    for v in nodes:
        exts.setdefault(oracle_extension(g, v), v)
    kept = remove_non_maximal(list(exts))
    return SafeSequenceSet(order_sequences(g, [SafeSequence(x, exts[x]) for x in kept]))


# --------------------------------------------------------------------------
# arc weighting for variable fixing


def forced_arc(g: StDag, u: int, v: int) -> int | None:
    """The arc every path visiting ``u`` then ``v`` consecutively in a safe
    sequence must use, if there is one.

    For consecutive elements of an extension this holds exactly when ``u``
    is the only in-neighbour of ``v`` or ``v`` the only out-neighbour of
    ``u``, and there is a single (non-parallel) arc between them.
    """
    between = g.arcs_between(u, v)
    if len(between) != 1:
        return None
    if g.graph.predecessors[v] == [u] or g.graph.successors[u] == [v]:
        return between[0]
    return None


def forced_arcs(g: StDag, seq: Sequence[int]) -> list[int]:
    out = []
    for u, v in zip(seq, seq[1:]):
        a = forced_arc(g, u, v)
        if a is not None:
            out.append(a)
    return out


def longest_safe_sequence_per_arc(g: StDag, sequences: SafeSequenceSet | None = None) -> dict[int, tuple[int, int | None]]:
    """ArcId -> (length of the longest safe sequence forcing the arc, index of
    that sequence). Arcs on no sequence map to ``(0, None)``; ties keep the
    first sequence in output order."""
    if sequences is None:
        sequences = maximal_safe_sequences(g)
    best: dict[int, tuple[int, int | None]] = {a: (0, None) for a in range(g.m)}
    for j, seq in enumerate(sequences):
        for a in forced_arcs(g, seq.items):
            if len(seq) > best[a][0]:
                best[a] = (len(seq), j)
    return best
