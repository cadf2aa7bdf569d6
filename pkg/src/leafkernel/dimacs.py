"""DIMACS-style text format for rooted digraph instances and Set Cover files.

Graph files::

    c comment
    p <n> <m>
    a <tail> <head>        (1-indexed, m lines)
    r <root>               (optional)
    k <int>                (optional)
    s <v> <v> ...          (optional willow stem, bottom to top)

Set Cover files: ``n m b`` then one line of element ids per set.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .digraph import Digraph, GraphError
from .gadgets import SetCoverInstance


class ParseError(GraphError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class ParsedGraph:
    digraph: Digraph
    root: int | None = None
    k: int | None = None
    stem: tuple[int, ...] | None = None


def _ints(tokens: Sequence[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(lineno, f"expected integers, got {' '.join(tokens)!r}") from None


def parse_digraph(text: str) -> ParsedGraph:
    n: int | None = None
    declared_m = 0
    arcs: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    root = k = None
    stem = None

    def vertex(v: int, lineno: int) -> int:
        assert n is not None
        if not 1 <= v <= n:
            raise ParseError(lineno, f"vertex {v} out of range 1..{n}")
        return v

    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        tag, args = tokens[0], tokens[1:]
        if tag == "p":
            if n is not None:
                raise ParseError(lineno, "duplicate problem line")
            vals = _ints(args, lineno)
            if len(vals) != 2 or vals[0] < 1 or vals[1] < 0:
                raise ParseError(lineno, "problem line must be 'p <n> <m>' with n >= 1")
            n, declared_m = vals
            continue
        if n is None:
            raise ParseError(lineno, f"'{tag}' line before the problem line")
        vals = _ints(args, lineno)
        if tag == "a":
            if len(vals) != 2:
                raise ParseError(lineno, "arc line must be 'a <tail> <head>'")
            u, v = vertex(vals[0], lineno), vertex(vals[1], lineno)
            if u == v:
                raise ParseError(lineno, f"self-loop on vertex {u}")
            if (u, v) in seen:
                raise ParseError(lineno, f"duplicate arc {u} {v}")
            seen.add((u, v))
            arcs.append((u, v))
        elif tag == "r":
            if len(vals) != 1:
                raise ParseError(lineno, "root line must be 'r <vertex>'")
            root = vertex(vals[0], lineno)
        elif tag == "k":
            if len(vals) != 1 or vals[0] < 1:
                raise ParseError(lineno, "parameter line must be 'k <int>' with k >= 1")
            k = vals[0]
        elif tag == "s":
            stem = tuple(vertex(v, lineno) for v in vals)
        else:
            raise ParseError(lineno, f"unknown line type {tag!r}")
    if n is None:
        raise ParseError(0, "missing problem line")
    if len(arcs) != declared_m:
        raise ParseError(0, f"problem line declares {declared_m} arcs, found {len(arcs)}")
    return ParsedGraph(Digraph(frozenset(range(1, n + 1)), frozenset(arcs)), root, k, stem)


def relabel_consecutive(d: Digraph) -> tuple[Digraph, dict[int, int]]:
    """Map the vertices, in sorted order, onto 1..n."""
    mapping = {v: i for i, v in enumerate(d.sorted_vertices(), start=1)}
    return Digraph.from_arcs(((mapping[u], mapping[v]) for u, v in d.arcs), mapping.values()), mapping


def serialize_digraph(
    d: Digraph,
    *,
    root: int | None = None,
    k: int | None = None,
    stem: Sequence[int] | None = None,
    comments: Iterable[str] = (),
) -> str:
    """Canonical text (arcs sorted); the vertex set must be exactly 1..n."""
    n = len(d)
    if d.vertices != frozenset(range(1, n + 1)):
        raise GraphError("serialize needs vertices 1..n; relabel_consecutive first")
    lines = [f"c {c}" for c in comments]
    lines.append(f"p {n} {len(d.arcs)}")
    lines.extend(f"a {u} {v}" for u, v in d.sorted_arcs())
    if root is not None:
        lines.append(f"r {root}")
    if k is not None:
        lines.append(f"k {k}")
    if stem is not None:
        lines.append("s " + " ".join(map(str, stem)))
    return "\n".join(lines) + "\n"


def parse_set_cover(text: str) -> SetCoverInstance:
    rows = [(i, raw) for i, raw in enumerate(text.splitlines(), start=1) if not raw.lstrip().startswith("c")]
    while rows and not rows[0][1].strip():
        rows.pop(0)
    if not rows:
        raise ParseError(0, "empty set cover file")
    lineno, header = rows[0]
    vals = _ints(header.split(), lineno)
    if len(vals) != 3:
        raise ParseError(lineno, "header must be 'n m b'")
    n, m, b = vals
    body = rows[1 : m + 1]
    if len(body) != m:
        raise ParseError(rows[-1][0], f"expected {m} set lines, found {len(body)}")
    if any(raw.strip() for _, raw in rows[m + 1 :]):
        raise ParseError(rows[m + 1][0], "trailing content after the set lines")
    family = []
    for lineno, raw in body:
        members = _ints(raw.split(), lineno)
        for e in members:
            if not 1 <= e <= n:
                raise ParseError(lineno, f"element {e} out of range 1..{n}")
        family.append(frozenset(members))
    return SetCoverInstance(n, tuple(family), b)
