"""Structural properties of dominator trees on random graphs."""

import pytest
from hypothesis import given, settings

import structure_checks as sc
from conftest import st_dags


@pytest.mark.parametrize("check", sc.ALL_NODE_CHECKS, ids=lambda f: f.__name__)
@settings(max_examples=300, deadline=None)
@given(g=st_dags(max_n=10, parallel=3))
def test_node_property(check, g):
    assert check(g) == []


@pytest.mark.parametrize("check", sc.ALL_ARC_CHECKS, ids=lambda f: f.__name__)
@settings(max_examples=300, deadline=None)
@given(g=st_dags(max_n=9, parallel=4))
def test_arc_property(check, g):
    assert check(g) == []


def test_checks_detect_a_broken_tree(diamond, monkeypatch):
    # swapping the trees must make the brute-force comparison fail
    real = sc.build_dominator_tree
    monkeypatch.setattr(sc, "build_dominator_tree", lambda g, d: real(g, "t" if d == "s" else "s"))
    assert sc.tree_vs_bruteforce(diamond)
