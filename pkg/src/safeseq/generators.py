"""Instance generators: every small s-t DAG up to isomorphism, random s-t
DAGs, parallel-arc injection and broom graphs for scaling runs."""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

import numpy as np

from .graph_core import DiGraph, StDag, validate_st_dag


def _pairs(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


@lru_cache(maxsize=None)
def _canonical_masks(n: int) -> tuple[int, ...]:
    """Upper-triangular arc masks (source 0, sink n-1) of the simple s-t DAGs
    on ``n`` nodes, one per isomorphism class.

    A mask is valid when every node but 0 has an in-arc and every node but
    ``n - 1`` has an out-arc. The canonical form of a class is the smallest
    mask, over all relabelings of the inner nodes, in an encoding over all
    ordered pairs.
    """
    pairs = _pairs(n)
    masks = np.arange(1 << len(pairs), dtype=np.int64)
    ok = np.ones(len(masks), dtype=bool)
    for v in range(n):
        if v > 0:
            has_in = np.zeros(len(masks), dtype=bool)
            for b, (i, j) in enumerate(pairs):
                if j == v:
                    has_in |= (masks >> b) & 1 == 1
            ok &= has_in
        if v < n - 1:
            has_out = np.zeros(len(masks), dtype=bool)
            for b, (i, j) in enumerate(pairs):
                if i == v:
                    has_out |= (masks >> b) & 1 == 1
            ok &= has_out
    masks = masks[ok]
    bits = [((masks >> b) & 1).astype(np.int64) for b in range(len(pairs))]

    def ordered_bit(i: int, j: int) -> int:
        return i * n + j

    best = None
    inner = list(range(1, n - 1))
    for perm in itertools.permutations(inner):
        relabel = [0] + list(perm) + [n - 1]
        code = np.zeros(len(masks), dtype=np.int64)
        for b, (i, j) in enumerate(pairs):
            code |= bits[b] << ordered_bit(relabel[i], relabel[j])
        best = code if best is None else np.minimum(best, code)
    _, first = np.unique(best, return_index=True)
    return tuple(int(x) for x in np.sort(masks[first]))


def exhaustive_st_dags(max_n: int = 7, min_n: int = 2):
    """Yield every simple s-t DAG with ``min_n..max_n`` nodes, once per
    isomorphism class. Node 0 is the source, ``n - 1`` the sink, arcs go
    from lower to higher ids, weights are 1."""
    for n in range(min_n, max_n + 1):
        pairs = _pairs(n)
        for mask in _canonical_masks(n):
            arcs = [(i, j, 1) for b, (i, j) in enumerate(pairs) if mask >> b & 1]
            yield validate_st_dag(DiGraph.from_arcs(n, arcs), 0, n - 1)


def exhaustive_count(n: int) -> int:
    return len(_canonical_masks(n))


def random_st_dag(
    rng: random.Random,
    n: int,
    density: float = 0.3,
    max_weight: int = 5,
    min_weight: int = 0,
) -> StDag:
    """Random simple s-t DAG on ``n >= 2`` nodes.

    Each inner node gets one arc from an earlier node and one to a later
    node, which makes 0 the only source and ``n - 1`` the only sink; every
    other forward pair is added with probability ``density``.
    """
    chosen = set()
    for v in range(1, n - 1):
        chosen.add((rng.randrange(v), v))
        chosen.add((v, rng.randrange(v + 1, n)))
    if n == 2 or not any(j == n - 1 for _, j in chosen):
        chosen.add((n - 2, n - 1) if n > 2 else (0, 1))
    for p in _pairs(n):
        if rng.random() < density:
            chosen.add(p)
    arcs = [(i, j, rng.randint(min_weight, max_weight)) for i, j in sorted(chosen)]
    return validate_st_dag(DiGraph.from_arcs(n, arcs), 0, n - 1)


def inject_parallel_arcs(rng: random.Random, g: StDag, count: int, max_weight: int = 5) -> StDag:
    """Copy ``count`` randomly chosen arcs (duplicates allowed)."""
    arcs = list(g.arcs)
    for _ in range(count):
        u, v, _ = arcs[rng.randrange(len(arcs))]
        arcs.append((u, v, rng.randint(0, max_weight)))
    return validate_st_dag(DiGraph(g.n, tuple(arcs), g.graph.labels), g.source, g.sink)


def random_multigraph(rng: random.Random, n: int, max_arcs: int = 12, density: float = 0.3) -> StDag:
    """Random s-t DAG with parallel arcs injected, at most ``max_arcs`` arcs
    in total (the simple base graph is resampled until it fits)."""
    if max_arcs < n - 1:
        raise ValueError(f"{n} nodes need at least {n - 1} arcs")
    g = random_st_dag(rng, n, density)
    while g.m > max_arcs:
        g = random_st_dag(rng, n, density)
    room = max(0, max_arcs - g.m)
    return inject_parallel_arcs(rng, g, rng.randint(0, room)) if room else g


def broom_graph(path_len: int, branches: int) -> StDag:
    """Path ``0 -> 1 -> ... -> path_len`` whose last node fans out into
    ``branches`` two-arc branches meeting at the sink."""
    end = path_len
    sink = path_len + branches + 1
    arcs = [(i, i + 1, 1) for i in range(path_len)]
    for b in range(branches):
        x = path_len + 1 + b
        arcs += [(end, x, 1), (x, sink, 1)]
    return validate_st_dag(DiGraph.from_arcs(sink + 1, arcs), 0, sink)
