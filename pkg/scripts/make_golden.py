"""Regenerate the LP/MPS golden files in tests/data/golden.

    python scripts/make_golden.py [--out tests/data/golden]

Only rerun after an intentional format change, then review the diff by hand.
"""

import argparse
from pathlib import Path

from safeseq.antichain_flow import select_fixing_sequences
from safeseq.graph_core import DiGraph, validate_st_dag
from safeseq.ilp import apply_safety_fixing, build_model, export_model


def instances():
    path = validate_st_dag(DiGraph.from_arcs(3, [(0, 1, 3), (1, 2, 5)]), 0, 2)
    diamond = validate_st_dag(DiGraph.from_arcs(4, [(0, 1, 3), (0, 2, 7), (1, 3, 3), (2, 3, 7)]), 0, 3)
    fix = lambda g, model: apply_safety_fixing(model, select_fixing_sequences(g))
    return {
        "path_mpe_k1.lp": export_model(build_model(path, 1, "mpe"), "lp"),
        "path_mpe_k1.mps": export_model(build_model(path, 1, "mpe"), "mps"),
        "path_lsq_k1_fixed.lp": export_model(fix(path, build_model(path, 1, "lsq")), "lp"),
        "path_lsq_k1_fixed.mps": export_model(fix(path, build_model(path, 1, "lsq")), "mps"),
        "diamond_mpe_k2_fixed.lp": export_model(fix(diamond, build_model(diamond, 2, "mpe")), "lp"),
        "diamond_mpe_k2_fixed.mps": export_model(fix(diamond, build_model(diamond, 2, "mpe")), "mps"),
    }


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default="tests/data/golden")
    args = p.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, text in instances().items():
        (out / name).write_text(text)
        print(out / name)


if __name__ == "__main__":
    main()
