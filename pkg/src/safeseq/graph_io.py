"""Reader/writer for the multi-graph ``.graph`` text format.

Each graph is a block::

    # <graph name>
    <node count>
    <tail> <head> <weight>
    ...

Node ids are 0-based. Weights that parse as integers stay ``int``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, TextIO

from .graph_core import DiGraph, GraphError


class GraphParseError(ValueError):
    def __init__(self, message: str, line: int, graph: str | None = None):
        super().__init__(f"line {line}: {message}")
        self.message = message
        self.line = line
        # name of the block the error belongs to, when known
        self.graph = graph

    def __reduce__(self):
        return (type(self), (self.message, self.line, self.graph))


@dataclass(frozen=True)
class NamedGraph:
    name: str
    graph: DiGraph


def _number(tok: str, line: int):
    try:
        return int(tok)
    except ValueError:
        pass
    try:
        value = float(tok)
    except ValueError:
        raise GraphParseError(f"bad number {tok!r}", line) from None
    if value != value or value in (float("inf"), float("-inf")):
        raise GraphParseError(f"non-finite weight {tok!r}", line)
    return value


def parse_graphs(text: str) -> list[NamedGraph]:
    """Parse all blocks; raises :class:`GraphParseError` on the first problem."""
    out = []
    for g in iter_graphs(text):
        if isinstance(g, GraphParseError):
            raise g
        out.append(g)
    return out


def iter_graphs(text: str) -> Iterable[NamedGraph | GraphParseError]:
    """Yield each block, or the parse error for a malformed block so that
    callers can carry on with the rest of the file."""
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        if not lines[i].strip():
            i += 1
            continue
        start = i
        if not lines[i].startswith("#"):
            yield GraphParseError("expected '# <graph name>'", i + 1)
            i += 1
            while i < len(lines) and not lines[i].startswith("#"):
                i += 1
            continue
        name = lines[i][1:].strip()
        i += 1
        end = i
        while end < len(lines) and not lines[end].startswith("#"):
            end += 1
        try:
            yield _parse_block(name, lines[i:end], i + 1)
        except GraphParseError as err:
            err.graph = name
            yield err
        except GraphError as err:
            yield GraphParseError(f"graph {name!r}: {err}", start + 1, name)
        i = end


def _parse_block(name: str, body: list[str], first_line: int) -> NamedGraph:
    rows = [(first_line + j, ln.split()) for j, ln in enumerate(body) if ln.strip()]
    if not rows:
        raise GraphParseError(f"graph {name!r} has no node count", first_line)
    lineno, toks = rows[0]
    if len(toks) != 1:
        raise GraphParseError("expected a single node count", lineno)
    try:
        n = int(toks[0])
    except ValueError:
        raise GraphParseError(f"bad node count {toks[0]!r}", lineno) from None
    if n < 0:
        raise GraphParseError("negative node count", lineno)
    arcs = []
    for lineno, toks in rows[1:]:
        if len(toks) != 3:
            raise GraphParseError("expected 'tail head weight'", lineno)
        try:
            u, v = int(toks[0]), int(toks[1])
        except ValueError:
            raise GraphParseError("node ids must be integers", lineno) from None
        if not (0 <= u < n and 0 <= v < n):
            raise GraphParseError(f"node id out of range 0..{n - 1}", lineno)
        w = _number(toks[2], lineno)
        if w < 0:
            raise GraphParseError("negative weight", lineno)
        arcs.append((u, v, w))
    return NamedGraph(name, DiGraph(n, tuple(arcs)))


def read_graphs(path) -> list[NamedGraph]:
    with open(path) as fh:
        return parse_graphs(fh.read())


def format_weight(w) -> str:
    if isinstance(w, int):
        return str(w)
    return repr(float(w))


def format_graphs(graphs: Iterable[NamedGraph]) -> str:
    out = []
    for ng in graphs:
        out.append(f"# {ng.name}\n{ng.graph.node_count}\n")
        for u, v, w in ng.graph.arcs:
            out.append(f"{u} {v} {format_weight(w)}\n")
    return "".join(out)


def write_graphs(graphs: Iterable[NamedGraph], fh: TextIO | str) -> None:
    text = format_graphs(graphs)
    if isinstance(fh, str):
        with open(fh, "w") as f:
            f.write(text)
    else:
        fh.write(text)
