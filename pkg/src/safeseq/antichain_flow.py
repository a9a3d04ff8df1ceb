"""Min-flow with lower bounds, maximum-weight arc antichains and the
selection of pairwise path-incompatible safe sequences used for ILP fixing.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Literal, Sequence

from .graph_core import StDag

INF = math.inf


class Infeasible(RuntimeError):
    pass


@dataclass
class FlowNetwork:
    node_count: int
    tails: list[int]
    heads: list[int]
    lower: list[int]
    capacity: list[float]
    source: int
    sink: int
    flow: list[int] = field(default_factory=list)

    @classmethod
    def from_dag(cls, g: StDag, lower: Sequence[int], capacity: Sequence[float] | None = None) -> "FlowNetwork":
        cap = list(capacity) if capacity is not None else [INF] * g.m
        return cls(g.n, [a[0] for a in g.arcs], [a[1] for a in g.arcs], list(lower), cap, g.source, g.sink)

    def dump(self) -> str:
        """DIMACS-like text: ``p min n m``, then ``a tail head lower cap flow``."""
        lines = [f"p min {self.node_count} {len(self.tails)}", f"n {self.source} s", f"n {self.sink} t"]
        for a in range(len(self.tails)):
            cap = "inf" if self.capacity[a] == INF else self.capacity[a]
            f = self.flow[a] if self.flow else 0
            lines.append(f"a {self.tails[a]} {self.heads[a]} {self.lower[a]} {cap} {f}")
        return "\n".join(lines) + "\n"


class _Residual:
    """Adjacency-list residual graph; edge ``2i`` is forward, ``2i+1`` its twin."""

    def __init__(self, n: int):
        self.adj: list[list[int]] = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[float] = []

    def add(self, u: int, v: int, cap: float, back: float = 0) -> int:
        e = len(self.to)
        self.to += [v, u]
        self.cap += [cap, back]
        self.adj[u].append(e)
        self.adj[v].append(e + 1)
        return e

    def max_flow(self, s: int, t: int) -> float:
        """Edmonds-Karp: shortest augmenting paths by BFS."""
        total = 0
        while True:
            via = [-1] * len(self.adj)
            via[s] = -2
            queue = deque([s])
            while queue and via[t] == -1:
                u = queue.popleft()
                for e in self.adj[u]:
                    v = self.to[e]
                    if via[v] == -1 and self.cap[e] > 0:
                        via[v] = e
                        queue.append(v)
            if via[t] == -1:
                return total
            push, v = INF, t
            while v != s:
                e = via[v]
                push = min(push, self.cap[e])
                v = self.to[e ^ 1]
            if push == INF:
                raise ValueError("unbounded flow: infinite-capacity s-t path")
            v = t
            while v != s:
                e = via[v]
                self.cap[e] -= push
                self.cap[e ^ 1] += push
                v = self.to[e ^ 1]
            total += push

    def reachable(self, s: int) -> list[bool]:
        seen = [False] * len(self.adj)
        seen[s] = True
        stack = [s]
        while stack:
            u = stack.pop()
            for e in self.adj[u]:
                v = self.to[e]
                if not seen[v] and self.cap[e] > 0:
                    seen[v] = True
                    stack.append(v)
        return seen


def _feasible_flow(net: FlowNetwork) -> list[int]:
    """Any flow meeting the lower bounds, via the circulation reduction."""
    n, m = net.node_count, len(net.tails)
    big = sum(net.lower) + 1
    res = _Residual(n + 2)
    ss, tt = n, n + 1
    excess = [0] * n
    edge = []
    for a in range(m):
        cap = net.capacity[a]
        if cap < net.lower[a]:
            raise Infeasible(f"arc {a} has capacity below its lower bound")
        edge.append(res.add(net.tails[a], net.heads[a], cap - net.lower[a]))
        excess[net.heads[a]] += net.lower[a]
        excess[net.tails[a]] -= net.lower[a]
    res.add(net.sink, net.source, big)
    need = 0
    for v in range(n):
        if excess[v] > 0:
            res.add(ss, v, excess[v])
            need += excess[v]
        elif excess[v] < 0:
            res.add(v, tt, -excess[v])
    if res.max_flow(ss, tt) != need:
        raise Infeasible("lower bounds cannot be met")
    return [net.lower[a] + res.cap[edge[a] ^ 1] for a in range(m)]


def _minimize(net: FlowNetwork) -> tuple[int, list[int], _Residual]:
    flow = _feasible_flow(net)
    m = len(net.tails)
    res = _Residual(net.node_count)
    # one pair per arc: head->tail undoes flow down to the lower bound,
    # tail->head adds flow up to the capacity
    edge = [res.add(net.heads[a], net.tails[a], flow[a] - net.lower[a], net.capacity[a] - flow[a]) for a in range(m)]
    value = sum(flow[a] for a in range(m) if net.tails[a] == net.source)
    value -= sum(flow[a] for a in range(m) if net.heads[a] == net.source)
    value -= res.max_flow(net.sink, net.source)
    final = [net.lower[a] + res.cap[edge[a]] for a in range(m)]
    return value, final, res


def min_flow_with_lower_bounds(net: FlowNetwork) -> tuple[int, list[int]]:
    """Minimum s-t flow value meeting every lower bound.

    Start from a feasible flow, then push as much as possible back from sink
    to source. The minimizing flow is also stored on ``net.flow``.
    """
    value, flow, _ = _minimize(net)
    net.flow = flow
    return value, flow


@dataclass(frozen=True)
class AntichainSelection:
    arcs: tuple[int, ...]
    weight: int
    # one entry per positive-weight antichain arc, in antichain order
    sequences: tuple[tuple[int, ...], ...] = ()
    # ArcIds whose variables get fixed for each attached sequence
    fixed_arcs: tuple[tuple[int, ...], ...] = ()
    mode: str = "arcs"


def max_weight_arc_antichain(g: StDag, weights: Sequence[int] | dict[int, int]) -> AntichainSelection:
    """Maximum-weight set of pairwise unreachable arcs.

    Its weight equals the minimum flow with ``lower(a) = weight(a)``. After
    minimizing, the nodes reached from the sink in the residual graph form a
    set with no arc leaving it; the arcs entering it are tight and form the
    antichain.
    """
    w = [int(weights[a]) for a in range(g.m)]
    value, flow, res = _minimize(FlowNetwork.from_dag(g, w))
    near_t = res.reachable(g.sink)
    chosen = tuple(a for a in range(g.m) if not near_t[g.tail(a)] and near_t[g.head(a)])
    assert all(flow[a] == w[a] for a in chosen)
    weight = sum(w[a] for a in chosen)
    assert weight == value, (weight, value)
    return AntichainSelection(chosen, weight)


def arc_width(g: StDag) -> int:
    return max_weight_arc_antichain(g, [1] * g.m).weight


def is_arc_antichain(g: StDag, arcs: Sequence[int]) -> bool:
    """Pairwise check: no head reaches another arc's tail."""
    succ = g.graph.successors
    for a in arcs:
        seen = {g.head(a)}
        stack = [g.head(a)]
        while stack:
            x = stack.pop()
            for y in succ[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if any(b != a and g.tail(b) in seen for b in arcs):
            return False
    return True


Mode = Literal["nodes", "arcs", "subset"]


def select_fixing_sequences(
    g: StDag,
    mode: Mode = "arcs",
    c: Sequence[int] | None = None,
    sequences=None,
) -> AntichainSelection:
    """Weight every arc by the longest safe sequence containing it, take a
    maximum-weight antichain, attach one longest sequence per positive-weight
    antichain arc.

    ``mode`` selects node sequences (arcs fixed only where forced), arc
    sequences, or arc sequences for covers of the arc subset ``c``. Pass
    ``sequences`` to reuse an already computed maximal safe sequence set of
    the matching kind.
    """
    from .safety_arcs import maximal_safe_arc_sequences, maximal_safe_arc_sequences_subset
    from .safety_nodes import forced_arcs, maximal_safe_sequences

    if mode not in ("nodes", "arcs", "subset"):
        raise ValueError(f"unknown mode {mode!r}")
    if c is not None and mode != "subset":
        # sequences safe for covers of all arcs are not safe for covers of c
        raise ValueError(f"an arc subset needs mode 'subset', not {mode!r}")
    if sequences is None:
        if mode == "nodes":
            sequences = maximal_safe_sequences(g)
        elif mode == "arcs":
            sequences = maximal_safe_arc_sequences(g)
        elif c is None:
            raise ValueError("subset mode needs an arc set")
        else:
            sequences = maximal_safe_arc_sequences_subset(g, c)
    seqs = [s.items for s in sequences]
    fixes = [forced_arcs(g, s) for s in seqs] if mode == "nodes" else seqs

    best = [(0, -1)] * g.m
    for j, arcs in enumerate(fixes):
        for a in arcs:
            if len(seqs[j]) > best[a][0]:
                best[a] = (len(seqs[j]), j)
    chain = max_weight_arc_antichain(g, [b[0] for b in best])
    attached = [best[a][1] for a in chain.arcs if best[a][0] > 0]
    return AntichainSelection(
        chain.arcs,
        chain.weight,
        tuple(tuple(seqs[j]) for j in attached),
        tuple(tuple(fixes[j]) for j in attached),
        mode,
    )
