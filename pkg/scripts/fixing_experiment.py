"""Fixed-variable percentages on a random dataset, bucketed by arc-width.

    python scripts/fixing_experiment.py [--graphs 300] [--seed 1] [--out runs/fixing]

Writes a .graph dataset, runs ``safeseq ilp`` on it for full safety and the
25th-percentile subset, and prints the width-bucketed tables that
``safeseq stats`` produces. Solver times are out of scope; the vars%
column is the figure of merit.
"""

import argparse
import contextlib
import io
import random
from pathlib import Path

from safeseq import cli
from safeseq.generators import random_st_dag
from safeseq.graph_core import DiGraph
from safeseq.graph_io import NamedGraph, write_graphs


def dataset(count: int, seed: int) -> list[NamedGraph]:
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = rng.randint(4, 40)
        # sparse splicing-graph-like DAGs: few branchings, long chains
        g = random_st_dag(rng, n, rng.uniform(0.5, 3.0) / n, max_weight=200, min_weight=1)
        out.append(NamedGraph(f"g{i}", DiGraph(g.n, g.arcs)))
    return out


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--graphs", type=int, default=300)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out", default="runs/fixing")
    p.add_argument("--jobs", type=int, default=1)
    args = p.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    data = out / "dataset.graph"
    write_graphs(dataset(args.graphs, args.seed), str(data))
    for safety, problem in (("full", "mpe"), ("subset:25", "lsq")):
        tag = safety.replace(":", "")
        report = out / f"report_{problem}_{tag}.json"
        argv = ["ilp", str(data), "--problem", problem, "--safety", safety,
                "--outdir", str(out / f"models_{problem}_{tag}"), "--report", str(report), "--jobs", str(args.jobs)]
        with contextlib.redirect_stdout(io.StringIO()):
            code = cli.main(argv)
        print(f"\n## {problem} --safety {safety} (exit {code})")
        cli.main(["stats", str(report), "--format", "markdown"])


if __name__ == "__main__":
    main()
