"""Time safe-sequence enumeration on broom graphs and fit a log-log slope.

    python scripts/scaling.py [--min-m 1000] [--max-m 100000] [--points 7]
                              [--branches 4 16 64] [--repeats 3]

A broom is a long path whose last node fans out into ``b`` two-arc
branches, so the output length grows like ``b * m``. Prints one TSV row
per (mode, b, m) and a slope per family; slopes near 1 mean time linear
in m plus output size.
"""

import argparse
import math
import time

import numpy as np

from safeseq.generators import broom_graph
from safeseq.safety_arcs import maximal_safe_arc_sequences
from safeseq.safety_nodes import maximal_safe_sequences

MODES = {"nodes": maximal_safe_sequences, "arcs": maximal_safe_arc_sequences}


def best_time(fn, g, repeats):
    best, out = math.inf, None
    for _ in range(repeats):
        start = time.perf_counter()
        out = fn(g)
        best = min(best, time.perf_counter() - start)
    return best, out.total_length


def main():
    p = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--min-m", type=int, default=1_000)
    p.add_argument("--max-m", type=int, default=100_000)
    p.add_argument("--points", type=int, default=7)
    p.add_argument("--branches", type=int, nargs="+", default=[4, 16, 64])
    p.add_argument("--sqrt-family", action="store_true", help="also run b = sqrt(m)/4")
    p.add_argument("--repeats", type=int, default=3)
    args = p.parse_args()

    sizes = np.unique(np.geomspace(args.min_m, args.max_m, args.points).astype(int))
    families = [(str(b), lambda m, b=b: b) for b in args.branches]
    if args.sqrt_family:
        families.append(("sqrt(m)/4", lambda m: max(1, int(math.sqrt(m) / 4))))

    print("mode\tb\tm\to\tseconds\tns_per_unit")
    slopes = []
    for mode, fn in MODES.items():
        for label, branches in families:
            xs, ys = [], []
            for m in sizes:
                b = branches(int(m))
                g = broom_graph(int(m) - 2 * b, b)
                secs, o = best_time(fn, g, args.repeats)
                xs.append(g.m + o)
                ys.append(secs)
                print(f"{mode}\t{b}\t{g.m}\t{o}\t{secs:.6f}\t{1e9 * secs / (g.m + o):.1f}")
            slope = float(np.polyfit(np.log(xs), np.log(ys), 1)[0])
            slopes.append((mode, label, slope))
    print()
    for mode, label, slope in slopes:
        print(f"slope\t{mode}\tb={label}\t{slope:.3f}")


if __name__ == "__main__":
    main()
