"""MinPathError and LeastSquares path-covering ILPs, safety-based variable
fixing, and an enumeration solver for tiny instances."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Literal, Sequence

import numpy as np
from scipy.optimize import linprog, nnls

from .antichain_flow import AntichainSelection
from .graph_core import PathExplosion, StDag, all_st_paths, path_limit

Problem = Literal["mpe", "lsq"]
PROBLEMS = {"mpe": "MinPathError", "lsq": "LeastSquares", "MinPathError": "mpe", "LeastSquares": "lsq"}


class InvalidK(ValueError):
    pass


class TooManySequences(ValueError):
    pass


def _problem(problem: str) -> str:
    if problem in ("mpe", "lsq"):
        return problem
    if problem in PROBLEMS:
        return PROBLEMS[problem]
    raise ValueError(f"unknown problem {problem!r}")


@dataclass(frozen=True)
class Variable:
    name: str
    kind: Literal["binary", "continuous"]
    lb: float = 0
    ub: float = math.inf


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[tuple[str, float], ...]
    sense: Literal["<=", ">=", "="]
    rhs: float


@dataclass(frozen=True)
class FixRecord:
    var: str
    arc: int
    path: int
    sequence: int


@dataclass(frozen=True)
class IlpModel:
    problem: str
    k: int
    graph: StDag
    variables: tuple[Variable, ...]
    constraints: tuple[Constraint, ...]
    objective: tuple[tuple[str, float], ...]
    # (var, var, coef) terms of sum coef * var * var'; LeastSquares only
    quadratic: tuple[tuple[str, str, float], ...] = ()
    fixings: tuple[FixRecord, ...] = ()
    big_m: float = 0

    @property
    def binary_count(self) -> int:
        return sum(v.kind == "binary" for v in self.variables)

    def fixed_values(self) -> dict[str, int]:
        return {f.var: 1 for f in self.fixings}

    def fixed_arcs_by_path(self) -> list[list[int]]:
        """For path index i (1-based), the arcs fixed on it, as list index i-1."""
        out: list[list[int]] = [[] for _ in range(self.k)]
        for f in self.fixings:
            out[f.path - 1].append(f.arc)
        while out and not out[-1]:
            out.pop()
        return out


def xname(a: int, i: int) -> str:
    return f"x{a}_{i}"


def _num(x) -> float | int:
    if isinstance(x, int):
        return x
    x = float(x)
    return int(x) if x.is_integer() else x


def build_model(g: StDag, k: int, problem: Problem | str = "mpe") -> IlpModel:
    """Path-shape constraints for ``k`` paths plus the problem-specific part.

    Products ``x * w`` and ``x * rho`` are linearized with a big-M equal to
    the sum of arc weights (at least 1).
    """
    problem = _problem(problem)
    if k < 1:
        raise InvalidK(f"k must be >= 1, got {k}")
    m = g.m
    if m == 0:
        raise ValueError("graph has no arcs")
    weights = [_num(g.weight(a)) for a in range(m)]
    big_m = _num(max(1, sum(weights)))
    paths = range(1, k + 1)

    variables = [Variable(xname(a, i), "binary", 0, 1) for i in paths for a in range(m)]
    variables += [Variable(f"w{i}", "continuous") for i in paths]
    if problem == "mpe":
        variables += [Variable(f"rho{i}", "continuous") for i in paths]
    variables += [Variable(f"p{a}_{i}", "continuous") for i in paths for a in range(m)]
    if problem == "mpe":
        variables += [Variable(f"q{a}_{i}", "continuous") for i in paths for a in range(m)]
    else:
        variables += [Variable(f"r{a}", "continuous", -math.inf, math.inf) for a in range(m)]

    cons: list[Constraint] = []
    for i in paths:
        cons.append(Constraint(f"src{i}", tuple((xname(a, i), 1) for a in g.graph.out_arcs[g.source]), "=", 1))
        for v in g.topo_order:
            if v in (g.source, g.sink):
                continue
            terms = [(xname(a, i), 1) for a in g.graph.in_arcs[v]] + [(xname(a, i), -1) for a in g.graph.out_arcs[v]]
            cons.append(Constraint(f"f{v}_{i}", tuple(terms), "=", 0))

    def linearize(prod: str, var: str):
        for i in paths:
            for a in range(m):
                p, x, y = f"{prod}{a}_{i}", xname(a, i), f"{var}{i}"
                cons.append(Constraint(f"{prod}m{a}_{i}", ((p, 1), (x, -big_m)), "<=", 0))
                cons.append(Constraint(f"{prod}v{a}_{i}", ((p, 1), (y, -1)), "<=", 0))
                cons.append(Constraint(f"{prod}l{a}_{i}", ((p, 1), (y, -1), (x, -big_m)), ">=", -big_m))

    linearize("p", "w")
    if problem == "mpe":
        linearize("q", "rho")
        for a in range(m):
            ps = [(f"p{a}_{i}", 1) for i in paths]
            cons.append(Constraint(f"elo{a}", tuple(ps + [(f"q{a}_{i}", 1) for i in paths]), ">=", weights[a]))
            cons.append(Constraint(f"ehi{a}", tuple(ps + [(f"q{a}_{i}", -1) for i in paths]), "<=", weights[a]))
        objective = tuple((f"rho{i}", 1) for i in paths)
        quadratic: tuple = ()
    else:
        for a in range(m):
            terms = ((f"r{a}", 1),) + tuple((f"p{a}_{i}", 1) for i in paths)
            cons.append(Constraint(f"fit{a}", terms, "=", weights[a]))
        objective = ()
        quadratic = tuple((f"r{a}", f"r{a}", 1) for a in range(m))

    return IlpModel(problem, k, g, tuple(variables), tuple(cons), objective, quadratic, (), big_m)


def apply_safety_fixing(model: IlpModel, selection: AntichainSelection) -> IlpModel:
    """Assign the i-th attached sequence to path i and fix its arcs to 1."""
    seqs = selection.fixed_arcs
    if len(seqs) > model.k:
        raise TooManySequences(f"{len(seqs)} sequences but only k={model.k} paths")
    records = list(model.fixings)
    taken = {f.var for f in records}
    for j, arcs in enumerate(seqs):
        i = j + 1
        for a in arcs:
            var = xname(a, i)
            if var not in taken:
                taken.add(var)
                records.append(FixRecord(var, a, i, j))
    return replace(model, fixings=tuple(records))


def fixing_statistics(model: IlpModel) -> tuple[int, int, float]:
    """(fixed x-variables, m*k, percentage fixed)."""
    total = model.graph.m * model.k
    fixed = len(model.fixings)
    return fixed, total, (100.0 * fixed / total if total else 0.0)


def percentile_subset(g: StDag, q: float) -> list[int]:
    """Data arcs whose weight is at least the nearest-rank q-th percentile
    of all data-arc weights."""
    if not 0 <= q <= 100:
        raise ValueError("percentile must be within [0, 100]")
    arcs = g.data_arcs
    if not arcs:
        return []
    ws = sorted(g.weight(a) for a in arcs)
    rank = math.ceil(Fraction(q) * len(ws) / 100)
    threshold = ws[max(rank, 1) - 1]
    return [a for a in arcs if g.weight(a) >= threshold]


# --------------------------------------------------------------------------
# exact oracle for tiny instances


@dataclass(frozen=True)
class PathSolution:
    paths: tuple[tuple[int, ...], ...]
    weights: tuple[float, ...]
    slacks: tuple[float, ...]
    objective: float
    problem: str = "mpe"


def _inner_mpe(inc: np.ndarray, b: np.ndarray):
    m, k = inc.shape
    c = np.concatenate([np.zeros(k), np.ones(k)])
    a_ub = np.vstack([np.hstack([-inc, -inc]), np.hstack([inc, -inc])])
    b_ub = np.concatenate([-b, b])
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=[(0, None)] * (2 * k), method="highs")
    if res.status != 0:
        return math.inf, None, None
    return float(res.fun), res.x[:k], res.x[k:]


def _inner_lsq(inc: np.ndarray, b: np.ndarray):
    w, _ = nnls(inc, b)
    r = b - inc @ w
    return float(r @ r), w, None


def solve_tiny(
    g: StDag,
    k: int,
    problem: Problem | str = "mpe",
    fixed: Sequence[Iterable[int]] | None = None,
    limit: int | None = None,
) -> PathSolution:
    """Best k-multiset of s-t paths with exactly solved continuous weights.

    ``fixed[i]`` lists arcs that path ``i + 1`` must contain (the effect of
    variable fixing); those leading paths are chosen in order, the remaining
    ones as a multiset. Raises :class:`PathExplosion` when
    ``path_count ** k`` exceeds ``limit``; returns objective ``inf`` when no
    choice is feasible.
    """
    problem = _problem(problem)
    if k < 1:
        raise InvalidK(f"k must be >= 1, got {k}")
    limit = path_limit() if limit is None else limit
    paths = all_st_paths(g, limit, arcs=True)
    if len(paths) ** k > limit:
        raise PathExplosion(f"{len(paths)}^{k} path tuples exceed the limit {limit}")
    fixed = [set(f) for f in (fixed or [])]
    if len(fixed) > k:
        raise TooManySequences(f"{len(fixed)} fixed paths but k={k}")
    b = np.array([float(g.weight(a)) for a in range(g.m)])
    inc_cols = []
    for p in paths:
        col = np.zeros(g.m)
        col[list(p)] = 1
        inc_cols.append(col)
    inner = _inner_mpe if problem == "mpe" else _inner_lsq

    lead = [[j for j, p in enumerate(paths) if f <= set(p)] for f in fixed]
    cache: dict[tuple[int, ...], tuple] = {}
    best = (math.inf, None)
    for head in itertools.product(*lead):
        for tail in itertools.combinations_with_replacement(range(len(paths)), k - len(fixed)):
            choice = head + tail
            key = tuple(sorted(choice))
            if key not in cache:
                inc = np.column_stack([inc_cols[j] for j in key])
                cache[key] = inner(inc, b)
            value = cache[key][0]
            if value < best[0] - 1e-12:
                best = (value, choice)
    value, choice = best
    if choice is None:
        return PathSolution((), (), (), math.inf, problem)
    key = tuple(sorted(choice))
    _, w, rho = cache[key]
    # report weights in the order of ``choice``
    order = sorted(range(k), key=lambda i: choice[i])
    pos = {i: r for r, i in enumerate(order)}
    weights = tuple(float(w[pos[i]]) for i in range(k))
    slacks = tuple(float(rho[pos[i]]) for i in range(k)) if rho is not None else ()
    return PathSolution(tuple(paths[j] for j in choice), weights, slacks, value, problem)


def solve_model_tiny(model: IlpModel, limit: int | None = None) -> PathSolution:
    return solve_tiny(model.graph, model.k, model.problem, model.fixed_arcs_by_path(), limit)


def check_solution(g: StDag, sol: PathSolution, tol: float = 1e-6) -> bool:
    """Every path is an s-t path and, for MinPathError, every arc satisfies
    ``|w(a) - sum w_i| <= sum rho_i`` over the paths through ``a``."""
    for p in sol.paths:
        if not p or g.tail(p[0]) != g.source or g.head(p[-1]) != g.sink:
            return False
        if any(g.head(a) != g.tail(b) for a, b in zip(p, p[1:])):
            return False
    if sol.problem == "mpe":
        for a in range(g.m):
            through = [i for i, p in enumerate(sol.paths) if a in p]
            got = sum(sol.weights[i] for i in through)
            if abs(g.weight(a) - got) > sum(sol.slacks[i] for i in through) + tol:
                return False
    return True


def solution_objective(g: StDag, sol: PathSolution) -> float:
    """Recompute the objective from paths and weights."""
    if sol.problem == "mpe":
        return float(sum(sol.slacks))
    return float(sum((g.weight(a) - sum(w for p, w in zip(sol.paths, sol.weights) if a in p)) ** 2 for a in range(g.m)))


# --------------------------------------------------------------------------
# model files


def _fmt(x) -> str:
    x = _num(x)
    return str(x) if isinstance(x, int) else repr(x)


def _lp_terms(terms, per_line: int = 8) -> str:
    parts = []
    for j, (var, coef) in enumerate(terms):
        coef = _num(coef)
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = var if mag == 1 else f"{_fmt(mag)} {var}"
        if j == 0:
            parts.append(f"- {body}" if sign == "-" else body)
        else:
            parts.append(f"{sign} {body}")
        if j and j % per_line == 0:
            parts[-1] = "\n   " + parts[-1]
    return " ".join(parts).replace(" \n", "\n")


_LP_SENSE = {"<=": "<=", ">=": ">=", "=": "="}


def export_lp(model: IlpModel) -> str:
    """CPLEX-LP text. Fixed binaries move to ``General`` with ``x = 1``
    bounds, since a ``Binary`` entry would reset their bounds to [0, 1]."""
    fixed = model.fixed_values()
    out = [f"\\ {PROBLEMS[model.problem]} k={model.k} n={model.graph.n} m={model.graph.m} fixed={len(fixed)}"]
    out.append("Minimize")
    if model.quadratic:
        quad = " + ".join(
            f"{_fmt(2 * c)} {a} ^ 2" if a == b else f"{_fmt(c)} {a} * {b}" for a, b, c in model.quadratic
        )
        lin = _lp_terms(model.objective)
        out.append(f" obj: {lin + ' + ' if lin else ''}[ {quad} ] / 2")
    else:
        out.append(f" obj: {_lp_terms(model.objective)}")
    out.append("Subject To")
    for c in model.constraints:
        out.append(f" {c.name}: {_lp_terms(c.terms)} {_LP_SENSE[c.sense]} {_fmt(c.rhs)}")
    out.append("Bounds")
    for v in model.variables:
        if v.name in fixed:
            out.append(f" {v.name} = 1")
        elif v.lb == -math.inf and v.ub == math.inf:
            out.append(f" {v.name} free")
    binaries = [v.name for v in model.variables if v.kind == "binary" and v.name not in fixed]
    generals = [v.name for v in model.variables if v.kind == "binary" and v.name in fixed]
    for title, names in (("Binary", binaries), ("General", generals)):
        if names:
            out.append(title)
            for j in range(0, len(names), 10):
                out.append(" " + " ".join(names[j : j + 10]))
    out.append("End")
    return "\n".join(out) + "\n"


@dataclass
class MpsData:
    """Structural content of an MPS file, comparable with ``==``."""

    name: str = ""
    rows: dict[str, str] = field(default_factory=dict)
    objective: str = ""
    columns: dict[str, dict[str, float]] = field(default_factory=dict)
    rhs: dict[str, float] = field(default_factory=dict)
    bounds: dict[str, tuple[float, float]] = field(default_factory=dict)
    integers: set[str] = field(default_factory=set)
    quadratic: dict[tuple[str, str], float] = field(default_factory=dict)


_MPS_SENSE = {"<=": "L", ">=": "G", "=": "E"}


def model_to_mps_data(model: IlpModel) -> MpsData:
    d = MpsData(name=f"safeseq_{model.problem}_k{model.k}", objective="obj")
    d.rows["obj"] = "N"
    for v in model.variables:
        d.columns[v.name] = {}
    for var, coef in model.objective:
        d.columns[var]["obj"] = float(coef)
    for c in model.constraints:
        d.rows[c.name] = _MPS_SENSE[c.sense]
        for var, coef in c.terms:
            d.columns[var][c.name] = d.columns[var].get(c.name, 0.0) + float(coef)
        if c.rhs != 0:
            d.rhs[c.name] = float(c.rhs)
    fixed = model.fixed_values()
    for v in model.variables:
        if v.kind == "binary":
            d.integers.add(v.name)
        lo, hi = (1.0, 1.0) if v.name in fixed else (float(v.lb), float(v.ub))
        d.bounds[v.name] = (lo, hi)
    for a, b, c in model.quadratic:
        # Q entry of the 1/2 x'Qx convention, lower triangle
        key = (a, b) if a >= b else (b, a)
        d.quadratic[key] = d.quadratic.get(key, 0.0) + (2.0 * c if a == b else float(c))
    return d


def _mps_line(f1: str, f2: str, f3: str = "", f4: str = "") -> str:
    # fields start at columns 2, 5, 15 and 25; longer names push the rest right
    line = f" {f1:<2} {f2:<8}"
    if f3:
        line += f"  {f3:<8}  {f4:>12}" if f4 else f"  {f3}"
    return line.rstrip()


def export_mps(model: IlpModel) -> str:
    """Fixed-column MPS; the LeastSquares objective goes to ``QUADOBJ``."""
    d = model_to_mps_data(model)
    out = [f"NAME          {d.name}", "ROWS"]
    out += [_mps_line(sense, row) for row, sense in d.rows.items()]
    out.append("COLUMNS")
    in_int = False
    for var, entries in d.columns.items():
        is_int = var in d.integers
        if is_int != in_int:
            marker = "'INTORG'" if is_int else "'INTEND'"
            out.append(f"    MARKER                 'MARKER'                 {marker}")
            in_int = is_int
        if not entries:
            out.append(_mps_line("", var, d.objective, "0"))
        for row, coef in entries.items():
            out.append(_mps_line("", var, row, _fmt(coef)))
    if in_int:
        out.append("    MARKER                 'MARKER'                 'INTEND'")
    out.append("RHS")
    out += [_mps_line("", "RHS", row, _fmt(val)) for row, val in d.rhs.items()]
    out.append("BOUNDS")
    for var, (lo, hi) in d.bounds.items():
        if lo == hi:
            out.append(_mps_line("FX", "BND", var, _fmt(lo)))
        elif lo == -math.inf and hi == math.inf:
            out.append(_mps_line("FR", "BND", var))
        else:
            if lo != 0:
                out.append(_mps_line("LO", "BND", var, _fmt(lo)))
            if hi != math.inf:
                out.append(_mps_line("UP", "BND", var, _fmt(hi)))
    if d.quadratic:
        out.append("QUADOBJ")
        out += [_mps_line("", a, b, _fmt(c)) for (a, b), c in d.quadratic.items()]
    out.append("ENDATA")
    return "\n".join(out) + "\n"


def export_model(model: IlpModel, fmt: Literal["lp", "mps"] = "lp") -> str:
    fmt = fmt.lower()
    if fmt == "lp":
        return export_lp(model)
    if fmt == "mps":
        return export_mps(model)
    raise ValueError(f"unknown model format {fmt!r}")


def read_mps(text: str) -> MpsData:
    """Whitespace-splitting MPS reader covering what :func:`export_mps`
    writes (free-format names are accepted too)."""
    d = MpsData()
    section = None
    in_int = False
    for raw in text.splitlines():
        if not raw.strip() or raw.startswith("*"):
            continue
        tok = raw.split()
        if not raw[0].isspace():
            section = tok[0]
            if section == "NAME":
                d.name = tok[1] if len(tok) > 1 else ""
            if section == "ENDATA":
                break
            continue
        if section == "ROWS":
            sense, row = tok
            d.rows[row] = sense
            if sense == "N" and not d.objective:
                d.objective = row
        elif section == "COLUMNS":
            if len(tok) >= 3 and tok[1] == "'MARKER'":
                in_int = tok[2] == "'INTORG'" or tok[2] == "INTORG"
                continue
            var = tok[0]
            entries = d.columns.setdefault(var, {})
            if in_int:
                d.integers.add(var)
            for row, val in zip(tok[1::2], tok[2::2]):
                entries[row] = entries.get(row, 0.0) + float(val)
            # a placeholder zero objective entry only declares the column
            if entries.get(d.objective) == 0.0:
                del entries[d.objective]
        elif section == "RHS":
            for row, val in zip(tok[1::2], tok[2::2]):
                d.rhs[row] = float(val)
        elif section == "BOUNDS":
            kind, _, var = tok[:3]
            val = float(tok[3]) if len(tok) > 3 else None
            lo, hi = d.bounds.get(var, (0.0, math.inf))
            if kind == "FX":
                lo = hi = val
            elif kind == "FR":
                lo, hi = -math.inf, math.inf
            elif kind == "LO":
                lo = val
            elif kind == "UP":
                hi = val
            elif kind == "MI":
                lo = -math.inf
            elif kind == "PL":
                hi = math.inf
            elif kind == "BV":
                lo, hi = 0.0, 1.0
                d.integers.add(var)
            d.bounds[var] = (lo, hi)
        elif section == "QUADOBJ":
            a, b, val = tok
            d.quadratic[(a, b)] = float(val)
    for var in d.columns:
        d.bounds.setdefault(var, (0.0, math.inf))
    return d
