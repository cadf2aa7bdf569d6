"""Digraph value type and the connectivity primitives the reduction rules query."""

from __future__ import annotations

import enum
from collections import deque
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property

from . import _backend

Arc = tuple[int, int]

UNIQUE_BRANCHING_MAX_N = 12


class GraphError(ValueError):
    """Raised on malformed graphs, unknown vertices or violated preconditions."""


@dataclass(frozen=True)
class Digraph:
    """Simple directed graph over integer vertex ids. Immutable."""

    vertices: frozenset[int]
    arcs: frozenset[Arc]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", frozenset(self.vertices))
        object.__setattr__(self, "arcs", frozenset(self.arcs))
        for u, v in self.arcs:
            if u == v:
                raise GraphError(f"self-loop on vertex {u}")
            if u not in self.vertices or v not in self.vertices:
                raise GraphError(f"arc ({u}, {v}) has an endpoint outside the vertex set")

    @classmethod
    def from_arcs(cls, arcs: Iterable[Arc], vertices: Iterable[int] = ()) -> Digraph:
        arcs = frozenset((int(u), int(v)) for u, v in arcs)
        verts = set(vertices)
        for u, v in arcs:
            verts.add(u)
            verts.add(v)
        return cls(frozenset(verts), arcs)

    @cached_property
    def succ(self) -> Mapping[int, frozenset[int]]:
        out: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.arcs:
            out[u].add(v)
        return {v: frozenset(s) for v, s in out.items()}

    @cached_property
    def pred(self) -> Mapping[int, frozenset[int]]:
        inn: dict[int, set[int]] = {v: set() for v in self.vertices}
        for u, v in self.arcs:
            inn[v].add(u)
        return {v: frozenset(s) for v, s in inn.items()}

    def __len__(self) -> int:
        return len(self.vertices)

    def out_neighbors(self, v: int) -> frozenset[int]:
        return self.succ[v]

    def in_neighbors(self, v: int) -> frozenset[int]:
        return self.pred[v]

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arcs

    def sorted_vertices(self) -> list[int]:
        return sorted(self.vertices)

    def sorted_arcs(self) -> list[Arc]:
        return sorted(self.arcs)

    def without_arcs(self, arcs: Iterable[Arc]) -> Digraph:
        return Digraph(self.vertices, self.arcs - frozenset(arcs))

    def with_arcs(self, arcs: Iterable[Arc]) -> Digraph:
        return Digraph(self.vertices, self.arcs | frozenset(arcs))

    def without_vertices(self, vs: Iterable[int]) -> Digraph:
        drop = frozenset(vs)
        return Digraph(
            self.vertices - drop,
            frozenset(a for a in self.arcs if a[0] not in drop and a[1] not in drop),
        )

    def induced(self, vs: Iterable[int]) -> Digraph:
        keep = frozenset(vs)
        if not keep <= self.vertices:
            raise GraphError(f"unknown vertices {sorted(keep - self.vertices)}")
        return Digraph(keep, frozenset(a for a in self.arcs if a[0] in keep and a[1] in keep))

    def next_id(self) -> int:
        return max(self.vertices, default=0) + 1

    def __repr__(self) -> str:
        return f"Digraph(n={len(self.vertices)}, arcs={self.sorted_arcs()})"


class Variant(str, enum.Enum):
    BRANCHING = "branching"
    TREE = "tree"


@dataclass(frozen=True)
class RootedInstance:
    digraph: Digraph
    root: int
    k: int
    variant: Variant = Variant.BRANCHING

    def __post_init__(self) -> None:
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.root not in self.digraph.vertices:
            raise GraphError(f"root {self.root} is not a vertex")
        if self.k < 1:
            raise GraphError(f"parameter k must be >= 1, got {self.k}")

    def replace(self, digraph: Digraph, root: int | None = None) -> RootedInstance:
        return RootedInstance(digraph, self.root if root is None else root, self.k, self.variant)


@dataclass(frozen=True)
class OutTree:
    """Rooted out-tree given by a parent map.

    A lone root counts as one leaf.
    """

    root: int
    parent: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "parent", dict(self.parent))
        if self.root in self.parent:
            raise GraphError("the root cannot have a parent")
        for v in self.parent:
            seen = {v}
            x = self.parent[v]
            while x != self.root:
                if x in seen or x not in self.parent:
                    raise GraphError(f"parent map does not lead from {v} to the root")
                seen.add(x)
                x = self.parent[x]

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.parent) | {self.root}

    @property
    def arcs(self) -> frozenset[Arc]:
        return frozenset((p, v) for v, p in self.parent.items())

    @cached_property
    def leaf_count(self) -> int:
        inner = set(self.parent.values())
        return len(self.vertices - inner)

    def leaves(self) -> frozenset[int]:
        return self.vertices - frozenset(self.parent.values())

    def is_out_tree_of(self, d: Digraph) -> bool:
        return self.vertices <= d.vertices and self.arcs <= d.arcs

    def is_out_branching_of(self, d: Digraph) -> bool:
        return self.is_out_tree_of(d) and self.vertices == d.vertices

    def is_path(self) -> bool:
        children = list(self.parent.values())
        return len(children) == len(set(children))

    def path_order(self) -> list[int]:
        """Vertices root-first; only meaningful when :meth:`is_path`."""
        child = {p: v for v, p in self.parent.items()}
        order = [self.root]
        while order[-1] in child:
            order.append(child[order[-1]])
        return order


def _check_vertex(d: Digraph, v: int) -> None:
    if v not in d.vertices:
        raise GraphError(f"unknown vertex {v}")


def reachable_from(d: Digraph, r: int, *, avoid: Iterable[int] = (), skip_arc: Arc | None = None) -> frozenset[int]:
    """Vertices reachable from ``r``; ``avoid`` vertices and ``skip_arc`` are treated as deleted."""
    _check_vertex(d, r)
    blocked = set(avoid)
    if r in blocked:
        return frozenset()
    seen = {r}
    queue = deque([r])
    succ = d.succ
    while queue:
        x = queue.popleft()
        for y in succ[x]:
            if y in seen or y in blocked or (x, y) == skip_arc:
                continue
            seen.add(y)
            queue.append(y)
    return frozenset(seen)


def dominators(d: Digraph, r: int) -> dict[int, frozenset[int]]:
    """Dominator sets w.r.t. root ``r``: delete each candidate and re-test reachability."""
    reach = reachable_from(d, r)
    dom: dict[int, set[int]] = {v: ({v, r} if v in reach else set()) for v in d.vertices}
    for u in reach:
        if u == r:
            continue
        without_u = reachable_from(d, r, avoid=(u,))
        for v in reach - without_u:
            dom[v].add(u)
    return {v: frozenset(s) for v, s in dom.items()}


def is_separator(d: Digraph, r: int, s: Iterable[int], v: int) -> bool:
    """True iff every path from ``r`` to ``v`` meets ``s``."""
    sep = frozenset(s)
    _check_vertex(d, r)
    _check_vertex(d, v)
    for x in sep:
        _check_vertex(d, x)
    if v in sep or r in sep:
        raise GraphError("separator must exclude both the root and the target vertex")
    return v not in reachable_from(d, r, avoid=sep)


def contract_arc(d: Digraph, u: int, v: int, new_id: int | None = None) -> tuple[Digraph, int]:
    """Contract arc ``uv`` into a fresh vertex; returns the new graph and the new id."""
    if (u, v) not in d.arcs:
        raise GraphError(f"arc ({u}, {v}) is not in the digraph")
    merged = d.next_id() if new_id is None else new_id
    if merged in d.vertices:
        raise GraphError(f"vertex id {merged} already in use")
    pair = (u, v)
    arcs: set[Arc] = set()
    for a, b in d.arcs:
        a2 = merged if a in pair else a
        b2 = merged if b in pair else b
        if a2 != b2:
            arcs.add((a2, b2))
    verts = (d.vertices - {u, v}) | {merged}
    return Digraph(verts, frozenset(arcs)), merged


class _Indexed:
    """Dense-index view of a digraph for the search kernels."""

    def __init__(self, d: Digraph, root: int):
        self.ids = d.sorted_vertices()
        self.index = {v: i for i, v in enumerate(self.ids)}
        self.root = self.index[root]
        self.in_lists = [sorted(self.index[u] for u in d.pred[v]) for v in self.ids]
        # BFS order keeps parents early, which makes the leaf bound prune sooner.
        order: list[int] = []
        seen = {root}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in sorted(d.succ[x]):
                if y not in seen:
                    seen.add(y)
                    order.append(self.index[y])
                    queue.append(y)
        self.reaches_all = len(seen) == len(self.ids)
        self.order = order

    def to_tree(self, parent: list[int]) -> OutTree:
        ids = self.ids
        return OutTree(
            ids[self.root],
            {ids[i]: ids[p] for i, p in enumerate(parent) if i != self.root},
        )


def unique_out_branching(d: Digraph, root: int, *, max_n: int = UNIQUE_BRANCHING_MAX_N) -> OutTree | None:
    """The out-branching rooted at ``root`` if there is exactly one, else None."""
    _check_vertex(d, root)
    if len(d) > max_n:
        raise GraphError(f"unique_out_branching limited to {max_n} vertices, got {len(d)}")
    idx = _Indexed(d, root)
    if not idx.reaches_all:
        return None
    found = _backend.collect_arborescences(len(idx.ids), idx.root, idx.in_lists, idx.order, 2)
    if len(found) != 1:
        return None
    return idx.to_tree(found[0])
