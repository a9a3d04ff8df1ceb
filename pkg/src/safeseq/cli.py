"""Batch front end: ``safeseq safety``, ``safeseq ilp`` and ``safeseq stats``.

Exit codes: 0 success, 1 input/usage error (the rest of the batch still
runs), 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .antichain_flow import arc_width, select_fixing_sequences
from .graph_core import GraphError, PathExplosion, StDag, as_st_dag
from .graph_io import GraphParseError, NamedGraph, iter_graphs
from .ilp import (
    TooManySequences,
    apply_safety_fixing,
    build_model,
    export_model,
    fixing_statistics,
    percentile_subset,
    solve_tiny,
)
from .safety_arcs import maximal_safe_arc_sequences, maximal_safe_arc_sequences_subset
from .safety_nodes import maximal_safe_sequences
from .safety_subset import maximal_safe_sequences_subset

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2
DEFAULT_BUCKETS = "1-3,4-6,7-9,10+"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# configs and records


@dataclass(frozen=True)
class SafetyConfig:
    mode: str = "nodes"
    subset_percentile: float | None = None
    subset: dict[str, tuple[int, ...]] | None = None
    fmt: str = "tsv"


@dataclass(frozen=True)
class IlpConfig:
    problem: str = "mpe"
    safety: str = "full"
    k: str = "auto"
    export: str = "lp"
    solve_tiny: bool = False
    fixing_mode: str = "arcs"

    @property
    def subset_percentile(self) -> float | None:
        if self.safety.startswith("subset:"):
            return float(self.safety.split(":", 1)[1])
        return None


@dataclass
class GraphRecord:
    graph: str
    n: int
    m: int
    width: int
    k: int | None = None
    prep_seconds: float = 0.0
    sequences: int = 0
    total_length: int = 0
    fixed: int = 0
    binaries: int = 0
    fixed_pct: float = 0.0
    model_file: str | None = None
    objective_unfixed: float | None = None
    objective_fixed: float | None = None
    note: str | None = None


@dataclass
class RunReport:
    command: str
    config: dict
    records: list[GraphRecord] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)
    buckets: str = DEFAULT_BUCKETS

    def aggregates(self) -> list[dict]:
        return aggregate([asdict(r) for r in self.records], parse_buckets(self.buckets))

    def to_json(self) -> str:
        data = {
            "command": self.command,
            "config": self.config,
            "records": [asdict(r) for r in self.records],
            "failures": self.failures,
            "buckets": self.buckets,
            "aggregates": self.aggregates(),
        }
        return json.dumps(data, indent=2, sort_keys=True, default=_json_default) + "\n"


def _json_default(x):
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    raise TypeError(type(x))


def parse_buckets(spec: str) -> list[tuple[str, int, float]]:
    """``"1-3,4-6,10+"`` -> [(label, low, high)]."""
    out = []
    for part in spec.split(","):
        part = part.strip()
        m = re.fullmatch(r"(\d+)\+", part)
        if m:
            out.append((part, int(m.group(1)), math.inf))
            continue
        m = re.fullmatch(r"(\d+)-(\d+)", part)
        if not m or int(m.group(1)) > int(m.group(2)):
            raise UsageError(f"bad width bucket {part!r}")
        out.append((part, int(m.group(1)), int(m.group(2))))
    return out


def aggregate(records: Sequence[dict], buckets) -> list[dict]:
    rows = []
    for label, lo, hi in buckets:
        group = [r for r in records if lo <= r["width"] <= hi]
        if not group:
            continue
        ms = [r["m"] for r in group]
        rows.append(
            {
                "width": label,
                "graphs": len(group),
                "avg_m": sum(ms) / len(ms),
                "max_m": max(ms),
                "prep": sum(r["prep_seconds"] for r in group) / len(group),
                "vars_pct": sum(r["fixed_pct"] for r in group) / len(group),
            }
        )
    return rows


# --------------------------------------------------------------------------
# shared batch plumbing


@dataclass
class _Outcome:
    index: int
    graph_id: str
    content: str = ""
    record: GraphRecord | None = None
    files: dict[str, str] = field(default_factory=dict)
    error: str | None = None
    code: int = EXIT_OK
    timing: float = 0.0


def _graph_ids(items) -> list[str]:
    seen: dict[str, int] = {}
    ids = []
    for j, item in enumerate(items):
        base = item.name if isinstance(item, NamedGraph) else (item.graph or f"#{j}")
        seen[base] = seen.get(base, 0) + 1
        ids.append(base if seen[base] == 1 else f"{base}#{seen[base]}")
    return ids


def _load(path: str) -> list:
    with open(path) as fh:
        return list(iter_graphs(fh.read()))


def _run_batch(items: list, worker: Callable, cfg, jobs: int) -> list[_Outcome]:
    ids = _graph_ids(items)
    tasks = [(j, ids[j], items[j], cfg) for j in range(len(items))]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_guarded, [worker] * len(tasks), tasks))
    return [_guarded(worker, t) for t in tasks]


def _guarded(worker, task) -> _Outcome:
    j, gid, item, cfg = task
    if isinstance(item, GraphParseError):
        return _Outcome(j, gid, error=f"graph {gid!r}: {item}", code=EXIT_INPUT)
    try:
        g = as_st_dag(item.graph)
        return worker(j, gid, g, cfg)
    except GraphError as err:
        return _Outcome(j, gid, error=f"graph {gid!r}: {err}", code=EXIT_INPUT)
    except (TooManySequences, UsageError) as err:
        return _Outcome(j, gid, error=f"graph {gid!r}: {err}", code=EXIT_OK)
    except AssertionError as err:
        return _Outcome(j, gid, error=f"graph {gid!r}: invariant violated: {err}", code=EXIT_INVARIANT)


def _finish_code(outcomes: Iterable[_Outcome]) -> int:
    return max((o.code for o in outcomes), default=EXIT_OK)


def _slug(gid: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", gid).strip("_") or "graph"


# --------------------------------------------------------------------------
# safety


def _strip_synthetic_nodes(g: StDag, items: tuple[int, ...]) -> tuple[int, ...]:
    if not g.synthetic_arcs:
        return items
    return tuple(v for v in items if v not in (g.source, g.sink))


def _strip_synthetic_arcs(g: StDag, items: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(a for a in items if a not in g.synthetic_arcs)


def _safety_worker(j: int, gid: str, g: StDag, cfg: SafetyConfig) -> _Outcome:
    start = time.perf_counter()
    if cfg.mode == "nodes":
        if cfg.subset is not None:
            result = maximal_safe_sequences_subset(g, cfg.subset.get(gid, ()))
        else:
            result = maximal_safe_sequences(g)
    else:
        if cfg.subset_percentile is not None:
            result = maximal_safe_arc_sequences_subset(g, percentile_subset(g, cfg.subset_percentile))
        elif cfg.subset is not None:
            result = maximal_safe_arc_sequences_subset(g, cfg.subset.get(gid, ()))
        else:
            result = maximal_safe_arc_sequences(g)
    elapsed = time.perf_counter() - start

    strip = _strip_synthetic_nodes if cfg.mode == "nodes" else _strip_synthetic_arcs
    seqs = list(dict.fromkeys(x for x in (strip(g, s.items) for s in result) if x))
    if cfg.mode == "nodes":
        rendered = [list(s) for s in seqs]
    else:
        rendered = [[[g.tail(a), g.head(a), a] for a in s] for s in seqs]
    if cfg.fmt == "json":
        content = json.dumps({"graph": gid, "mode": cfg.mode, "sequences": rendered})
    else:
        lines = []
        for i, s in enumerate(rendered):
            cells = " ".join(str(v) for v in s) if cfg.mode == "nodes" else " ".join(f"{u}:{v}:{a}" for u, v, a in s)
            lines.append(f"{gid}\t{i}\t{cells}")
        content = "\n".join(lines)
    return _Outcome(j, gid, content=content, timing=elapsed)


def read_subset_file(path: str) -> dict[str, tuple[int, ...]]:
    """Lines ``graph_id<TAB>id id ...``; ``#`` starts a comment line."""
    out: dict[str, tuple[int, ...]] = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip() or line.startswith("#"):
                continue
            gid, _, rest = line.rstrip("\n").partition("\t")
            try:
                out[gid] = tuple(int(x) for x in rest.split())
            except ValueError:
                raise GraphParseError("subset ids must be integers", lineno) from None
    return out


def cmd_safety(args) -> int:
    if args.subset_percentile is not None and args.mode == "nodes":
        raise UsageError("--subset-percentile selects arcs by weight; use it with --mode arcs")
    if args.subset_percentile is not None and not 0 <= args.subset_percentile <= 100:
        raise UsageError("--subset-percentile must be within [0, 100]")
    subset = read_subset_file(args.subset_file) if args.subset_file else None
    cfg = SafetyConfig(args.mode, args.subset_percentile, subset, args.format)
    outcomes = _run_batch(_load(args.input), _safety_worker, cfg, args.jobs)

    blocks = [o.content for o in outcomes if o.error is None]
    if args.format == "json":
        text = "[" + ",\n".join(blocks) + "]\n"
    else:
        text = "".join(b + "\n" for b in blocks if b)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    for o in outcomes:
        if o.error:
            print(f"error\t{o.error}", file=sys.stderr)
        else:
            print(f"prep\t{o.graph_id}\t{o.timing:.6f}", file=sys.stderr)
    return _finish_code(outcomes)


# --------------------------------------------------------------------------
# ilp


def _ilp_worker(j: int, gid: str, g: StDag, cfg: IlpConfig) -> _Outcome:
    width = arc_width(g)
    k = width if cfg.k == "auto" else int(cfg.k)
    model = build_model(g, k, cfg.problem)
    rec = GraphRecord(gid, g.n, g.m, width, k)
    if cfg.safety != "none":
        q = cfg.subset_percentile
        start = time.perf_counter()
        if q is None:
            mode = cfg.fixing_mode
            seqs = maximal_safe_sequences(g) if mode == "nodes" else maximal_safe_arc_sequences(g)
            selection = select_fixing_sequences(g, mode, sequences=seqs)
        else:
            c = percentile_subset(g, q)
            seqs = maximal_safe_arc_sequences_subset(g, c)
            selection = select_fixing_sequences(g, "subset", c, sequences=seqs)
        rec.prep_seconds = time.perf_counter() - start
        rec.sequences, rec.total_length = len(seqs), seqs.total_length
        fixed_model = apply_safety_fixing(model, selection)
    else:
        fixed_model = model
    rec.fixed, rec.binaries, rec.fixed_pct = fixing_statistics(fixed_model)
    name = f"{j:04d}_{_slug(gid)}.{cfg.export}"
    rec.model_file = name
    files = {name: export_model(fixed_model, cfg.export)}
    if cfg.solve_tiny:
        try:
            rec.objective_unfixed = solve_tiny(g, k, cfg.problem).objective
            rec.objective_fixed = solve_tiny(g, k, cfg.problem, fixed_model.fixed_arcs_by_path()).objective
        except PathExplosion as err:
            rec.note = f"solve-tiny skipped: {err}"
    return _Outcome(j, gid, record=rec, files=files)


def cmd_ilp(args) -> int:
    if args.k != "auto" and (not args.k.isdigit() or int(args.k) < 1):
        raise UsageError("--k must be 'auto' or a positive integer")
    if args.safety not in ("none", "full") and not re.fullmatch(r"subset:\d+(\.\d+)?", args.safety):
        raise UsageError("--safety must be none, full or subset:<percentile>")
    cfg = IlpConfig(args.problem, args.safety, args.k, args.export, args.solve_tiny, args.fixing_mode)
    q = cfg.subset_percentile
    if q is not None and not 0 <= q <= 100:
        raise UsageError("subset percentile must be within [0, 100]")
    parse_buckets(args.buckets)
    outcomes = _run_batch(_load(args.input), _ilp_worker, cfg, args.jobs)

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    report = RunReport("ilp", asdict(cfg), buckets=args.buckets)
    for o in outcomes:
        for name, text in o.files.items():
            (outdir / name).write_text(text)
        if o.record is not None:
            report.records.append(o.record)
        if o.error:
            report.failures.append({"graph": o.graph_id, "error": o.error})
            print(f"error\t{o.error}", file=sys.stderr)
    report_path = Path(args.report) if args.report else outdir / "report.json"
    report_path.write_text(report.to_json())
    for r in report.records:
        obj = "" if r.objective_unfixed is None else f"\t{r.objective_unfixed:g}\t{r.objective_fixed:g}"
        print(f"{r.graph}\tk={r.k}\tfixed={r.fixed_pct:.1f}%{obj}")
    return _finish_code(outcomes)


# --------------------------------------------------------------------------
# stats

STAT_COLUMNS = ("width", "#g", "avg m", "max m", "prep", "vars%")


def stats_table(records: Sequence[dict], buckets: str = DEFAULT_BUCKETS, fmt: str = "tsv") -> str:
    rows = [
        (r["width"], str(r["graphs"]), f"{r['avg_m']:.1f}", str(r["max_m"]), f"{r['prep']:.4f}", f"{r['vars_pct']:.1f}")
        for r in aggregate(records, parse_buckets(buckets))
    ]
    if fmt == "markdown":
        lines = ["| " + " | ".join(STAT_COLUMNS) + " |", "|" + "---|" * len(STAT_COLUMNS)]
        lines += ["| " + " | ".join(r) + " |" for r in rows]
    else:
        lines = ["\t".join(STAT_COLUMNS)] + ["\t".join(r) for r in rows]
    return "\n".join(lines) + "\n"


def cmd_stats(args) -> int:
    records = []
    for path in args.reports:
        try:
            with open(path) as fh:
                records += json.load(fh).get("records", [])
        except (OSError, json.JSONDecodeError) as err:
            print(f"error\t{path}: {err}", file=sys.stderr)
            return EXIT_INPUT
    sys.stdout.write(stats_table(records, args.buckets, args.format))
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="safeseq", description="Maximal safe sequences and safety-fixed path ILPs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("safety", help="maximal safe sequences per graph")
    s.add_argument("input")
    s.add_argument("--mode", choices=("nodes", "arcs"), default="nodes")
    group = s.add_mutually_exclusive_group()
    group.add_argument("--subset-percentile", type=float, metavar="Q")
    group.add_argument("--subset-file", metavar="PATH")
    s.add_argument("--format", choices=("tsv", "json"), default="tsv")
    s.add_argument("--output", "-o")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_safety)

    i = sub.add_parser("ilp", help="build (and optionally solve tiny) path ILPs")
    i.add_argument("input")
    i.add_argument("--problem", choices=("mpe", "lsq"), default="mpe")
    i.add_argument("--safety", default="full", help="none | full | subset:<percentile>")
    i.add_argument("--fixing-mode", choices=("arcs", "nodes"), default="arcs")
    i.add_argument("--k", default="auto")
    i.add_argument("--export", choices=("lp", "mps"), default="lp")
    i.add_argument("--solve-tiny", action="store_true")
    i.add_argument("--outdir", default=".")
    i.add_argument("--report")
    i.add_argument("--buckets", default=DEFAULT_BUCKETS)
    i.add_argument("--jobs", type=int, default=1)
    i.set_defaults(func=cmd_ilp)

    t = sub.add_parser("stats", help="width-bucketed table from ilp reports")
    t.add_argument("reports", nargs="*")
    t.add_argument("--format", choices=("tsv", "markdown"), default="tsv")
    t.add_argument("--buckets", default=DEFAULT_BUCKETS)
    t.set_defaults(func=cmd_stats)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as stop:
        return stop.code if isinstance(stop.code, int) else EXIT_INPUT
    try:
        return args.func(args)
    except (UsageError, GraphParseError, OSError) as err:
        print(f"safeseq: error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as err:
        print(f"safeseq: invariant violated: {err}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
