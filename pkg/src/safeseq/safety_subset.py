"""Maximal safe sequences when only a node subset C has to be covered.

Works on the uncompressed graph. Each dominator tree is overlaid with
"blue" arcs linking every C-node to its nearest strict C-ancestor. A blue
path is univocal when each of its nodes except the deepest has exactly one
blue child. The maximal safe sequences are the extensions of the univocal
blue paths that occur with the same node set (in reversed order) in both
blue forests and whose deepest node in each forest is a blue leaf.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .dominators import DominatorTree, build_dominator_tree, extension
from .graph_core import StDag, all_st_paths
from .safety_nodes import (
    SafeSequence,
    SafeSequenceSet,
    is_subsequence,
    oracle_extension,
    order_sequences,
    remove_non_maximal,
)


@dataclass(frozen=True)
class BlueTree:
    base: DominatorTree
    in_c: tuple[bool, ...]
    # nearest strict C-ancestor, -1 when there is none
    blue_parent: tuple[int, ...]
    blue_children: tuple[int, ...]

    def blue_leaves(self) -> list[int]:
        return [v for v, c in enumerate(self.in_c) if c and self.blue_children[v] == 0]

    def univocal_path(self, leaf: int) -> tuple[int, ...]:
        """Longest univocal blue path whose deepest node is ``leaf``,
        listed deepest first."""
        path = [leaf]
        p = self.blue_parent[leaf]
        while p != -1 and self.blue_children[p] == 1:
            path.append(p)
            p = self.blue_parent[p]
        return tuple(path)


def blue_tree(tree: DominatorTree, c: Iterable[int]) -> BlueTree:
    n = tree.size
    in_c = [False] * n
    for v in c:
        in_c[v] = True
    nearest = [-1] * n  # nearest C-node among v and its ancestors
    blue_parent = [-1] * n
    blue_children = [0] * n
    stack = [tree.root]
    while stack:
        v = stack.pop()
        p = tree.parent[v]
        above = nearest[p] if p != -1 else -1
        nearest[v] = v if in_c[v] else above
        if in_c[v]:
            blue_parent[v] = above
            if above != -1:
                blue_children[above] += 1
        stack.extend(tree.children[v])
    return BlueTree(tree, tuple(in_c), tuple(blue_parent), tuple(blue_children))


def common_univocal_path(s_blue: BlueTree, t_blue: BlueTree, leaf: int) -> tuple[int, ...] | None:
    """The univocal path shared by both blue forests whose deepest s-node is
    ``leaf``, if any.

    It is a prefix ``x1..xj`` of the univocal s-path from ``leaf`` such that
    ``xj`` is a blue t-leaf and ``xj, ..., x1`` is a univocal t-path. At most
    one prefix qualifies: a longer one would need ``xj`` to have a blue
    t-child.
    """
    up = s_blue.univocal_path(leaf)
    tb, tk = t_blue.blue_parent, t_blue.blue_children
    for j, x in enumerate(up):
        if tk[x] != 0:
            continue
        # walk the t-forest up from x and compare with up[j-1], ..., up[0]
        y = x
        for i in range(j - 1, -1, -1):
            y = tb[y]
            if y != up[i] or tk[y] != 1:
                break
        else:
            return up[: j + 1]
    return None


@dataclass(frozen=True)
class SubsetSafetyRepresentation:
    s_blue: BlueTree
    t_blue: BlueTree
    # common univocal paths, s-forest orientation (deepest s-node first)
    paths: tuple[tuple[int, ...], ...]


def maximal_safe_sequences_subset(g: StDag, c: Iterable[int]) -> SafeSequenceSet:
    c = sorted(set(c))
    if not c:
        return SafeSequenceSet(())
    s_tree = build_dominator_tree(g, "s")
    t_tree = build_dominator_tree(g, "t")
    s_blue, t_blue = blue_tree(s_tree, c), blue_tree(t_tree, c)
    common = []
    for leaf in s_blue.blue_leaves():
        p = common_univocal_path(s_blue, t_blue, leaf)
        if p is not None:
            common.append(p)
    seqs = [SafeSequence(tuple(extension(s_tree, t_tree, p[0])), p[0]) for p in common]
    rep = SubsetSafetyRepresentation(s_blue, t_blue, tuple(common))
    return SafeSequenceSet(order_sequences(g, seqs), rep)


def oracle_is_safe_subset(g: StDag, c: Iterable[int], seq, limit: int | None = None) -> bool:
    """Some ``u`` in C has every s-t path through it containing ``seq``."""
    c = set(c)
    paths = all_st_paths(g, limit)
    for u in c:
        through = [p for p in paths if u in p]
        if through and all(is_subsequence(seq, p) for p in through):
            return True
    return False


def oracle_maximal_safe_subset(g: StDag, c: Iterable[int]) -> SafeSequenceSet:
    """Brute-force extensions of the C-nodes, duplicates and proper
    subsequences removed."""
    exts = {}
    for v in sorted(set(c)):
        exts.setdefault(oracle_extension(g, v), v)
    kept = remove_non_maximal(list(exts))
    return SafeSequenceSet(order_sequences(g, [SafeSequence(x, exts[x]) for x in kept]))
