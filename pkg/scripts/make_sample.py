"""Write the bundled 50-graph sample used by the format round-trip tests.

    python scripts/make_sample.py [--out tests/data/sample50.graph] [--seed 7]
"""

import argparse
import random

from safeseq.generators import inject_parallel_arcs, random_st_dag
from safeseq.graph_core import DiGraph
from safeseq.graph_io import NamedGraph, write_graphs


def sample(seed: int, count: int = 50) -> list[NamedGraph]:
    rng = random.Random(seed)
    out = []
    for i in range(count):
        g = random_st_dag(rng, rng.randint(2, 12), rng.choice([0.15, 0.3, 0.5]), max_weight=40)
        if i % 5 == 0:
            g = inject_parallel_arcs(rng, g, 2, max_weight=40)
        arcs = g.arcs
        if i % 3 == 0:
            # some fractional abundances
            arcs = tuple((u, v, round(w + rng.random(), 3)) for u, v, w in arcs)
        out.append(NamedGraph(f"graph {i} seed={seed}", DiGraph(g.n, arcs)))
    return out


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default="tests/data/sample50.graph")
    p.add_argument("--seed", type=int, default=7)
    args = p.parse_args()
    write_graphs(sample(args.seed), args.out)


if __name__ == "__main__":
    main()
