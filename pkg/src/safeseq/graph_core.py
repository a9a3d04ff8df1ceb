"""Graph representation, s-t normalization and the two compression transforms.

Nodes are integers ``0..node_count-1`` and arcs are identified by their
position in the arc list (``ArcId``). Parallel arcs are allowed everywhere.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

Arc = tuple[int, int, float]

DEFAULT_PATH_LIMIT = 100_000


class GraphError(ValueError):
    """Base class for structural problems with an input graph."""

    def __init__(self, message: str, node: int | None = None):
        super().__init__(message)
        self.node = node


class CycleDetected(GraphError):
    pass


class MultipleSources(GraphError):
    pass


class MultipleSinks(GraphError):
    pass


class UnreachableNode(GraphError):
    pass


class NoPath(GraphError):
    pass


class PathExplosion(RuntimeError):
    """Raised by enumeration-based oracles when an instance is too large."""


def path_limit() -> int:
    return int(os.environ.get("SAFESEQ_PATH_LIMIT", DEFAULT_PATH_LIMIT))


@dataclass(frozen=True)
class DiGraph:
    node_count: int
    arcs: tuple[Arc, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "arcs", tuple((int(u), int(v), w) for u, v, w in self.arcs))
        for u, v, w in self.arcs:
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise GraphError(f"arc {u}->{v} references a node outside 0..{self.node_count - 1}")
            if w < 0:
                raise GraphError(f"arc {u}->{v} has negative weight {w}")
        if self.labels is not None and len(self.labels) != self.node_count:
            raise GraphError("labels must have one entry per node")

    @classmethod
    def from_arcs(cls, node_count: int, arcs: Iterable[Sequence], labels=None) -> "DiGraph":
        """Build from ``(u, v)`` or ``(u, v, weight)`` tuples; missing weights are 0."""
        full = []
        for arc in arcs:
            u, v = arc[0], arc[1]
            full.append((u, v, arc[2] if len(arc) > 2 else 0))
        return cls(node_count, tuple(full), tuple(labels) if labels is not None else None)

    @property
    def m(self) -> int:
        return len(self.arcs)

    @cached_property
    def out_arcs(self) -> list[list[int]]:
        out = [[] for _ in range(self.node_count)]
        for a, (u, _, _) in enumerate(self.arcs):
            out[u].append(a)
        return out

    @cached_property
    def in_arcs(self) -> list[list[int]]:
        inc = [[] for _ in range(self.node_count)]
        for a, (_, v, _) in enumerate(self.arcs):
            inc[v].append(a)
        return inc

    @cached_property
    def successors(self) -> list[list[int]]:
        """Distinct out-neighbours of every node (parallel arcs collapsed)."""
        return [list(dict.fromkeys(self.arcs[a][1] for a in arcs)) for arcs in self.out_arcs]

    @cached_property
    def predecessors(self) -> list[list[int]]:
        return [list(dict.fromkeys(self.arcs[a][0] for a in arcs)) for arcs in self.in_arcs]

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)


@dataclass(frozen=True)
class StDag:
    """A validated s-t DAG. Build through :func:`validate_st_dag` or
    :func:`normalize_to_st_dag`; the constructor does not re-check."""

    graph: DiGraph
    source: int
    sink: int
    topo_order: tuple[int, ...]
    synthetic_arcs: frozenset[int] = field(default_factory=frozenset)

    @property
    def n(self) -> int:
        return self.graph.node_count

    @property
    def m(self) -> int:
        return self.graph.m

    @property
    def arcs(self) -> tuple[Arc, ...]:
        return self.graph.arcs

    @cached_property
    def rank(self) -> list[int]:
        """Position of every node in ``topo_order``."""
        r = [0] * self.n
        for i, v in enumerate(self.topo_order):
            r[v] = i
        return r

    def tail(self, a: int) -> int:
        return self.graph.arcs[a][0]

    def head(self, a: int) -> int:
        return self.graph.arcs[a][1]

    def weight(self, a: int):
        return self.graph.arcs[a][2]

    @property
    def data_arcs(self) -> list[int]:
        return [a for a in range(self.m) if a not in self.synthetic_arcs]

    def arcs_between(self, u: int, v: int) -> list[int]:
        return [a for a in self.graph.out_arcs[u] if self.graph.arcs[a][1] == v]

    def reversed(self) -> "StDag":
        """Arc-reversed graph with source and sink swapped; ArcIds preserved."""
        g = DiGraph(self.n, tuple((v, u, w) for u, v, w in self.graph.arcs), self.graph.labels)
        return StDag(g, self.sink, self.source, tuple(reversed(self.topo_order)), self.synthetic_arcs)


def topological_order(g: DiGraph) -> list[int]:
    """Kahn's algorithm, smallest node id first among ready nodes."""
    import heapq

    indeg = [len(a) for a in g.in_arcs]
    ready = [v for v in range(g.node_count) if indeg[v] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        u = heapq.heappop(ready)
        order.append(u)
        for a in g.out_arcs[u]:
            v = g.arcs[a][1]
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(ready, v)
    if len(order) != g.node_count:
        stuck = min(v for v in range(g.node_count) if indeg[v] > 0)
        raise CycleDetected(f"graph has a cycle through node {g.label(stuck)}", stuck)
    return order


def _reach(adj: list[list[int]], start: int) -> list[bool]:
    seen = [False] * len(adj)
    seen[start] = True
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                stack.append(v)
    return seen


def validate_st_dag(g: DiGraph, s: int, t: int) -> StDag:
    order = topological_order(g)
    if s == t and g.node_count != 1:
        raise GraphError("source and sink coincide")
    for v in range(g.node_count):
        if v != s and not g.in_arcs[v]:
            raise MultipleSources(f"node {g.label(v)} has no in-arcs but is not the source", v)
        if v != t and not g.out_arcs[v]:
            raise MultipleSinks(f"node {g.label(v)} has no out-arcs but is not the sink", v)
    if g.in_arcs[s]:
        raise MultipleSources(f"source {g.label(s)} has in-arcs", s)
    if g.out_arcs[t]:
        raise MultipleSinks(f"sink {g.label(t)} has out-arcs", t)
    from_s = _reach(g.successors, s)
    to_t = _reach(g.predecessors, t)
    for v in range(g.node_count):
        if not (from_s[v] and to_t[v]):
            raise UnreachableNode(f"node {g.label(v)} is not on any s-t path", v)
    return StDag(g, s, t, tuple(order))


def normalize_to_st_dag(
    g: DiGraph,
    starts: Iterable[int] | None = None,
    ends: Iterable[int] | None = None,
    start_weights: dict[int, float] | None = None,
    end_weights: dict[int, float] | None = None,
) -> StDag:
    """Add a fresh source ``s = n`` and sink ``t = n + 1``.

    Arcs ``s -> x`` for x in ``starts`` and ``y -> t`` for y in ``ends`` are
    appended after the original arcs (weight 0 unless given) and recorded as
    synthetic.
    """
    topological_order(g)
    n = g.node_count
    if starts is None:
        starts = [v for v in range(n) if not g.in_arcs[v]]
    if ends is None:
        ends = [v for v in range(n) if not g.out_arcs[v]]
    starts, ends = sorted(set(starts)), sorted(set(ends))
    if not starts or not ends:
        raise GraphError("normalization needs at least one start and one end node")
    start_weights = start_weights or {}
    end_weights = end_weights or {}
    s, t = n, n + 1
    arcs = list(g.arcs)
    arcs += [(s, x, start_weights.get(x, 0)) for x in starts]
    arcs += [(y, t, end_weights.get(y, 0)) for y in ends]
    labels = g.labels + ("s", "t") if g.labels is not None else None
    h = DiGraph(n + 2, tuple(arcs), labels)
    try:
        dag = validate_st_dag(h, s, t)
    except (MultipleSources, MultipleSinks) as err:
        # a start-less or end-less node is off every path from the new s to t
        raise UnreachableNode(f"node {h.label(err.node)} is not on any s-t path", err.node) from err
    return StDag(dag.graph, s, t, dag.topo_order, frozenset(range(g.m, len(arcs))))


def as_st_dag(g: DiGraph) -> StDag:
    """Use the graph's own unique source/sink when it has them, else normalize."""
    sources = [v for v in range(g.node_count) if not g.in_arcs[v]]
    sinks = [v for v in range(g.node_count) if not g.out_arcs[v]]
    if len(sources) == 1 and len(sinks) == 1 and sources != sinks:
        return validate_st_dag(g, sources[0], sinks[0])
    return normalize_to_st_dag(g)


# --------------------------------------------------------------------------
# compression


@dataclass(frozen=True)
class CompressionMap:
    forward: tuple[int, ...]
    expand: tuple[tuple[int, ...], ...]
    # compressed ArcId -> original ArcId
    arc_origin: tuple[int, ...] = ()

    def expand_sequence(self, seq: Iterable[int]) -> list[int]:
        out: list[int] = []
        for c in seq:
            out.extend(self.expand[c])
        return out


@dataclass(frozen=True)
class ArcCompressionMap:
    expand: tuple[tuple[int, ...], ...]
    # original node -> compressed node, -1 for removed (internal) nodes
    node_forward: tuple[int, ...] = ()

    def expand_sequence(self, seq: Iterable[int]) -> list[int]:
        out: list[int] = []
        for c in seq:
            out.extend(self.expand[c])
        return out


def compress_nodes(g: StDag) -> tuple[StDag, CompressionMap]:
    """Contract every maximal unitary path into a single node.

    Arc ``uv`` is contracted when ``v`` is the only out-neighbour of ``u`` and
    ``u`` the only in-neighbour of ``v`` (parallel copies count once).
    Compressed nodes are numbered by the topological rank of their first node,
    so the numbering is itself a topological order.
    """
    succ, pred = g.graph.successors, g.graph.predecessors
    joins_prev = [len(pred[v]) == 1 and len(succ[pred[v][0]]) == 1 for v in range(g.n)]
    forward = [-1] * g.n
    groups: list[tuple[int, ...]] = []
    for v in g.topo_order:
        if joins_prev[v]:
            continue
        group = [v]
        while len(succ[group[-1]]) == 1 and joins_prev[succ[group[-1]][0]]:
            group.append(succ[group[-1]][0])
        for x in group:
            forward[x] = len(groups)
        groups.append(tuple(group))

    arcs, origin = [], []
    for a, (u, v, w) in enumerate(g.arcs):
        if forward[u] != forward[v]:
            arcs.append((forward[u], forward[v], w))
            origin.append(a)
    h = DiGraph(len(groups), tuple(arcs))
    dag = StDag(h, forward[g.source], forward[g.sink], tuple(range(len(groups))))
    return dag, CompressionMap(tuple(forward), tuple(groups), tuple(origin))


def compress_arcs(g: StDag) -> tuple[StDag, ArcCompressionMap]:
    """Replace every maximal path whose inner nodes have in- and outdegree 1
    by a single arc (may create parallel arcs). The new arc keeps the weight
    of the first arc of its path."""
    out_arcs, in_arcs = g.graph.out_arcs, g.graph.in_arcs
    inner = [len(in_arcs[v]) == 1 and len(out_arcs[v]) == 1 for v in range(g.n)]
    kept = [v for v in g.topo_order if not inner[v]]
    node_forward = [-1] * g.n
    for i, v in enumerate(kept):
        node_forward[v] = i

    arcs, expand = [], []
    for u in kept:
        for a in out_arcs[u]:
            chain = [a]
            v = g.head(a)
            while inner[v]:
                chain.append(out_arcs[v][0])
                v = g.head(chain[-1])
            arcs.append((node_forward[u], node_forward[v], g.weight(a)))
            expand.append(tuple(chain))
    h = DiGraph(len(kept), tuple(arcs))
    dag = StDag(h, node_forward[g.source], node_forward[g.sink], tuple(range(len(kept))))
    return dag, ArcCompressionMap(tuple(expand), tuple(node_forward))


def line_graph(g: StDag) -> StDag:
    """Line graph augmented with a super-source ``m`` and super-sink ``m + 1``.

    Line node ``a`` stands for arc ``a`` of ``g``. The super-source points to
    every arc leaving ``g.source`` and every arc entering ``g.sink`` points to
    the super-sink, so the result is again an s-t DAG. All arcs have weight 0.
    """
    m = g.m
    S, T = m, m + 1
    arcs = [(S, a, 0) for a in g.graph.out_arcs[g.source]]
    for a in range(m):
        for b in g.graph.out_arcs[g.head(a)]:
            arcs.append((a, b, 0))
    arcs += [(a, T, 0) for a in g.graph.in_arcs[g.sink]]
    order = [S]
    for v in g.topo_order:
        order.extend(g.graph.out_arcs[v])
    order.append(T)
    return StDag(DiGraph(m + 2, tuple(arcs)), S, T, tuple(order))


def all_st_paths(g: StDag, limit: int | None = None, arcs: bool = False) -> list[tuple[int, ...]]:
    """Every s-t path as a node tuple (or ArcId tuple when ``arcs``).

    Paths come out in lexicographic order of topological rank. With parallel
    arcs, node paths are deduplicated while arc paths are not.
    """
    limit = path_limit() if limit is None else limit
    rank = g.rank
    out_arcs = g.graph.out_arcs
    order = [sorted(out_arcs[v], key=lambda a: (rank[g.head(a)], a)) for v in range(g.n)]
    paths: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()

    def emit(p):
        if p in seen:
            return
        seen.add(p)
        paths.append(p)
        if len(paths) > limit:
            raise PathExplosion(f"more than {limit} s-t paths")

    if g.source == g.sink:
        return [()] if arcs else [(g.source,)]
    nodes, used = [g.source], []
    stack = [iter(order[g.source])]
    while stack:
        a = next(stack[-1], None)
        if a is None:
            stack.pop()
            nodes.pop()
            if used:
                used.pop()
            continue
        v = g.head(a)
        if v == g.sink:
            emit(tuple(used + [a]) if arcs else tuple(nodes + [v]))
            continue
        nodes.append(v)
        used.append(a)
        stack.append(iter(order[v]))
    return paths
