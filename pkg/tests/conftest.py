import random

import pytest
from hypothesis import strategies as st

from safeseq.generators import exhaustive_st_dags
from safeseq.graph_core import DiGraph, StDag, validate_st_dag

# node names used by the hand-written graphs below
S, A, B, T = 0, 1, 2, 3


def dag(n, arcs, s=0, t=None) -> StDag:
    return validate_st_dag(DiGraph.from_arcs(n, arcs), s, n - 1 if t is None else t)


@pytest.fixture
def path_graph():
    """s -> a -> b -> t"""
    return dag(4, [(S, A, 1), (A, B, 1), (B, T, 1)])


@pytest.fixture
def diamond():
    """s -> a -> t, s -> b -> t; arc ids: sa=0, sb=1, at=2, bt=3"""
    return dag(4, [(S, A, 3), (S, B, 7), (A, T, 3), (B, T, 7)])


@pytest.fixture(scope="session")
def small_exhaustive():
    return list(exhaustive_st_dags(6))


@st.composite
def st_dags(draw, min_n=2, max_n=8, max_weight=5, min_weight=0, parallel=0):
    """Random s-t DAG: every inner node gets an arc from an earlier and to a
    later node, then random extra forward arcs and up to ``parallel``
    duplicated arcs."""
    n = draw(st.integers(min_n, max_n))
    arcs = set()
    for v in range(1, n - 1):
        arcs.add((draw(st.integers(0, v - 1)), v))
        arcs.add((v, draw(st.integers(v + 1, n - 1))))
    if not any(j == n - 1 for _, j in arcs):
        arcs.add((n - 2, n - 1))
    for i in range(n):
        for j in range(i + 1, n):
            if draw(st.booleans()) and draw(st.booleans()):
                arcs.add((i, j))
    arcs = sorted(arcs)
    extra = draw(st.lists(st.sampled_from(arcs), max_size=parallel)) if parallel else []
    weighted = [(u, v, draw(st.integers(min_weight, max_weight))) for u, v in arcs + extra]
    return dag(n, weighted)


def items(out):
    """Ordered sequence contents, ignoring which anchor produced each."""
    return [s.items for s in out]


def random_graphs(count, seed, n_range=(2, 8), density=0.3, **kw):
    from safeseq.generators import random_st_dag

    rng = random.Random(seed)
    return [random_st_dag(rng, rng.randint(*n_range), density, **kw) for _ in range(count)]


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])


def golden_texts() -> dict[str, str]:
    """Model files whose bytes are frozen under tests/data/golden."""
    from safeseq.antichain_flow import select_fixing_sequences
    from safeseq.ilp import apply_safety_fixing, build_model, export_model

    path = dag(3, [(0, 1, 3), (1, 2, 5)])
    diamond = dag(4, [(0, 1, 3), (0, 2, 7), (1, 3, 3), (2, 3, 7)])

    def fix(g, model):
        return apply_safety_fixing(model, select_fixing_sequences(g))

    return {
        "path_mpe_k1.lp": export_model(build_model(path, 1, "mpe"), "lp"),
        "path_mpe_k1.mps": export_model(build_model(path, 1, "mpe"), "mps"),
        "path_lsq_k1_fixed.lp": export_model(fix(path, build_model(path, 1, "lsq")), "lp"),
        "path_lsq_k1_fixed.mps": export_model(fix(path, build_model(path, 1, "lsq")), "mps"),
        "diamond_mpe_k2_fixed.lp": export_model(fix(diamond, build_model(diamond, 2, "mpe")), "lp"),
        "diamond_mpe_k2_fixed.mps": export_model(fix(diamond, build_model(diamond, 2, "mpe")), "mps"),
    }
