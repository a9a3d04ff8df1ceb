"""s- and t-dominator trees of an s-t DAG, plus a brute-force cutnode oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .graph_core import NoPath, StDag

Direction = Literal["s", "t"]


@dataclass(frozen=True)
class DominatorTree:
    """Rooted tree stored as a parent array (``parent[root] == -1``).

    ``pre``/``post`` are DFS entry/exit times, so ``u`` is an ancestor of
    ``v`` iff ``pre[u] <= pre[v]`` and ``post[v] <= post[u]``.
    """

    root: int
    parent: tuple[int, ...]
    depth: tuple[int, ...]
    children: tuple[tuple[int, ...], ...]
    pre: tuple[int, ...]
    post: tuple[int, ...]
    direction: Direction

    @property
    def size(self) -> int:
        return len(self.parent)

    def is_ancestor(self, u: int, v: int) -> bool:
        """True when ``u`` is ``v`` or an ancestor of it."""
        return self.pre[u] <= self.pre[v] and self.post[v] <= self.post[u]

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]

    def path_from_root(self, v: int) -> list[int]:
        path = []
        while v != -1:
            path.append(v)
            v = self.parent[v]
        path.reverse()
        return path

    def ancestors(self, v: int) -> set[int]:
        return set(self.path_from_root(v))

    def dom_k(self, v: int, k: int) -> int:
        """k-th strict ancestor of ``v``, or the root if there are fewer."""
        if k < 1:
            raise ValueError("k must be positive")
        if k >= self.depth[v]:
            return self.root
        for _ in range(k):
            v = self.parent[v]
        return v

    def to_text(self, labels=None) -> str:
        """Indented rendering, one node per line, children in id order."""
        name = (lambda v: labels[v]) if labels is not None else str
        lines = []
        stack = [(self.root, 0)]
        while stack:
            v, d = stack.pop()
            lines.append("  " * d + name(v))
            for c in reversed(self.children[v]):
                stack.append((c, d + 1))
        return "\n".join(lines) + "\n"

    def to_dot(self, labels=None) -> str:
        name = (lambda v: labels[v]) if labels is not None else str
        lines = [f"digraph {self.direction}_dominator_tree {{"]
        for v, p in enumerate(self.parent):
            if p != -1:
                lines.append(f'  "{name(p)}" -> "{name(v)}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _tree_from_parents(root: int, parent: list[int], depth: list[int], direction) -> DominatorTree:
    n = len(parent)
    children: list[list[int]] = [[] for _ in range(n)]
    for v, p in enumerate(parent):
        if p != -1:
            children[p].append(v)
    pre, post = [0] * n, [0] * n
    clock = 0
    stack = [(root, False)]
    while stack:
        v, done = stack.pop()
        if done:
            post[v] = clock
            clock += 1
            continue
        pre[v] = clock
        clock += 1
        stack.append((v, True))
        for c in reversed(children[v]):
            stack.append((c, False))
    return DominatorTree(
        root, tuple(parent), tuple(depth), tuple(tuple(c) for c in children), tuple(pre), tuple(post), direction
    )


def build_dominator_tree(g: StDag, direction: Direction = "s") -> DominatorTree:
    """Immediate dominators in one topological sweep.

    On a DAG every predecessor of ``v`` is finished before ``v``; the
    immediate dominator of ``v`` is the tree-LCA of its predecessors. The
    t-tree is the same computation on the reversed graph.
    """
    if direction == "s":
        root, order, preds = g.source, g.topo_order, g.graph.predecessors
    elif direction == "t":
        root, order, preds = g.sink, g.topo_order[::-1], g.graph.successors
    else:
        raise ValueError(f"direction must be 's' or 't', got {direction!r}")
    n = g.n
    parent = [-1] * n
    depth = [0] * n
    for v in order:
        if v == root:
            continue
        ps = preds[v]
        a = ps[0]
        for b in ps[1:]:
            while a != b:
                if depth[a] >= depth[b]:
                    a = parent[a]
                else:
                    b = parent[b]
        parent[v] = a
        depth[v] = depth[a] + 1
    tree = _tree_from_parents(root, parent, depth, direction)
    other = g.sink if direction == "s" else g.source
    assert other == root or tree.is_leaf(other), "the opposite endpoint dominates nothing"
    return tree


def _reaches_avoiding(adj: list[list[int]], u: int, v: int, banned: int) -> bool:
    if u == banned:
        return False
    seen = {u}
    stack = [u]
    while stack:
        x = stack.pop()
        if x == v:
            return True
        for y in adj[x]:
            if y != banned and y not in seen:
                seen.add(y)
                stack.append(y)
    return False


def cutnodes_bruteforce(g: StDag, u: int, v: int) -> list[int]:
    """Every node on all u-v paths (u and v included), in topological order.

    Removal-and-reachability per candidate; meant as a test oracle.
    """
    succ = g.graph.successors
    if not _reaches_avoiding(succ, u, v, -1):
        raise NoPath(f"node {u} does not reach node {v}")
    cut = [x for x in range(g.n) if x in (u, v) or not _reaches_avoiding(succ, u, v, x)]
    return sorted(cut, key=g.rank.__getitem__)


def is_dominator_by_neighborhood(g: StDag, u: int, direction: Direction = "s") -> bool:
    """u strictly dominates something iff some node's in-neighbourhood
    (out-neighbourhood for the t side) is exactly ``{u}``."""
    nbrs = g.graph.predecessors if direction == "s" else g.graph.successors
    return any(len(ns) == 1 and ns[0] == u for ns in nbrs)


def extension(s_tree: DominatorTree, t_tree: DominatorTree, anchor: int) -> list[int]:
    """s-tree root path down to ``anchor`` followed by the t-tree path from
    ``anchor`` up to its root, with ``anchor`` listed once."""
    seq = s_tree.path_from_root(anchor)
    v = t_tree.parent[anchor]
    while v != -1:
        seq.append(v)
        v = t_tree.parent[v]
    return seq
