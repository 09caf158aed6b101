"""Reader and writer for the ``bkg v1`` text format.

Example::

    # a path with one boundary vertex
    n 3
    boundary 0
    set terminals 2
    edge 0 1
    edge 1 2

``n`` gives the vertex count.  When vertex IDs are not exactly
``0..n-1``, the writer adds a ``vertices <id...>`` line listing them.  The
reader accepts that line as an optional extension.
"""
from __future__ import annotations

from pathlib import Path

from .errors import ParseError
from .graph import AnnotatedBoundariedGraph, BoundariedGraph, Graph


def _ids(tokens: list[str], lineno: int) -> list[int]:
    out = []
    for t in tokens:
        try:
            v = int(t)
        except ValueError:
            raise ParseError(f"bad vertex id {t!r}", lineno) from None
        if v < 0:
            raise ParseError(f"negative vertex id {v}", lineno)
        out.append(v)
    return out


def parse(text: str) -> AnnotatedBoundariedGraph:
    n: int | None = None
    explicit: list[int] | None = None
    boundary: list[int] = []
    sets: list[tuple[str, list[int]]] = []
    edges: list[tuple[int, int]] = []
    arcs: list[tuple[int, int]] = []
    seen_boundary = False
    where: dict[tuple[str, int, int], int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        if head == "n":
            if n is not None or len(rest) != 1:
                raise ParseError("expected a single 'n <count>' line", lineno)
            (n,) = _ids(rest, lineno)
        elif head == "vertices":
            if explicit is not None:
                raise ParseError("duplicate 'vertices' line", lineno)
            explicit = _ids(rest, lineno)
        elif head == "boundary":
            if seen_boundary:
                raise ParseError("duplicate 'boundary' line", lineno)
            seen_boundary = True
            boundary = _ids(rest, lineno)
        elif head == "set":
            if not rest:
                raise ParseError("'set' needs a name", lineno)
            sets.append((rest[0], _ids(rest[1:], lineno)))
        elif head in ("edge", "arc"):
            if len(rest) != 2:
                raise ParseError(f"'{head}' needs two endpoints", lineno)
            u, v = _ids(rest, lineno)
            if u == v:
                raise ParseError(f"loop at {u}", lineno)
            (edges if head == "edge" else arcs).append((u, v))
            where[(head, u, v)] = lineno
        else:
            raise ParseError(f"unknown directive {head!r}", lineno)
    if n is None:
        raise ParseError("missing 'n <count>' line")
    if explicit is None:
        vertices = set(range(n))
    else:
        vertices = set(explicit)
        if len(vertices) != len(explicit) or len(vertices) != n:
            raise ParseError("'vertices' line must list exactly n distinct IDs")
    for head, u, v in [("edge", *e) for e in edges] + [("arc", *a) for a in arcs]:
        if u not in vertices or v not in vertices:
            raise ParseError(f"{head} ({u},{v}) uses an undeclared vertex", where[(head, u, v)])
    for v in boundary:
        if v not in vertices:
            raise ParseError(f"boundary vertex {v} is undeclared")
    for name, s in sets:
        for v in s:
            if v not in vertices:
                raise ParseError(f"set {name!r} vertex {v} is undeclared")
    g = Graph.build(vertices, edges, arcs)
    return AnnotatedBoundariedGraph(BoundariedGraph(g, frozenset(boundary)), tuple((nm, frozenset(s)) for nm, s in sets))


def serialize(abg: AnnotatedBoundariedGraph) -> str:
    g = abg.graph
    lines = [f"n {len(g.vertices)}"]
    if g.vertices != set(range(len(g.vertices))):
        lines.append("vertices " + " ".join(map(str, sorted(g.vertices))))
    lines.append(" ".join(["boundary", *map(str, sorted(abg.boundary))]))
    for name, s in abg.annotations:
        lines.append(" ".join(["set", name, *map(str, sorted(s))]))
    lines.extend(f"edge {u} {v}" for u, v in sorted(g.edges))
    lines.extend(f"arc {u} {v}" for u, v in sorted(g.arcs))
    return "\n".join(lines) + "\n"


def read(path: str | Path) -> AnnotatedBoundariedGraph:
    return parse(Path(path).read_text())


def write(abg: AnnotatedBoundariedGraph, path: str | Path) -> None:
    Path(path).write_text(serialize(abg))
