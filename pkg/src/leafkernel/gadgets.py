"""Lower-bound constructions: disjoint-union composition, willow graphs,
the Set Cover gadget and the willow chain."""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field

from .digraph import Arc, Digraph, GraphError, reachable_from


@dataclass(frozen=True)
class SetCoverInstance:
    n: int
    family: tuple[frozenset[int], ...]
    b: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", tuple(frozenset(s) for s in self.family))
        if self.n < 1:
            raise GraphError("universe must be non-empty")
        universe = set(range(1, self.n + 1))
        covered: set[int] = set()
        for s in self.family:
            if not s <= universe:
                raise GraphError(f"set {sorted(s)} has elements outside 1..{self.n}")
            covered |= s
        if covered != universe:
            raise GraphError(f"elements {sorted(universe - covered)} are not in any set")

    @property
    def m(self) -> int:
        return len(self.family)


def minimum_cover_size(sc: SetCoverInstance) -> int:
    universe = frozenset(range(1, sc.n + 1))
    for size in range(1, sc.m + 1):
        for combo in itertools.combinations(sc.family, size):
            if frozenset().union(*combo) == universe:
                return size
    raise AssertionError("unreachable: instance validation guarantees a cover")


@dataclass(frozen=True)
class WillowGraph:
    """A digraph split into a stem path (``a1``) and backward arcs (``a2``).

    ``stem`` runs bottom to top.
    """

    digraph: Digraph
    stem: tuple[int, ...]
    a1: frozenset[Arc]
    a2: frozenset[Arc]
    labels: Mapping[int, str] = field(default_factory=dict, compare=False)

    def __post_init__(self) -> None:
        stem = self.stem
        if sorted(stem) != self.digraph.sorted_vertices():
            raise GraphError("stem must list every vertex exactly once")
        if self.a1 != frozenset(zip(stem, stem[1:])):
            raise GraphError("a1 must be exactly the stem path")
        if self.a1 & self.a2 or self.a1 | self.a2 != self.digraph.arcs:
            raise GraphError("a1 and a2 must partition the arc set")
        pos = {v: i for i, v in enumerate(stem)}
        for u, v in self.a2:
            if pos[v] >= pos[u]:
                raise GraphError(f"arc ({u}, {v}) in a2 is not a backward arc of the stem")
        heads = {v for _, v in self.a2}
        sources = [v for v in stem if v not in heads]
        if len(sources) != 1:
            raise GraphError(f"(V, a2) must have exactly one in-degree-0 vertex, found {sources}")

    @classmethod
    def from_stem(
        cls, stem: Sequence[int], back_arcs: Iterable[Arc], labels: Mapping[int, str] | None = None
    ) -> WillowGraph:
        stem = tuple(stem)
        a1 = frozenset(zip(stem, stem[1:]))
        a2 = frozenset(back_arcs)
        return cls(Digraph(frozenset(stem), a1 | a2), stem, a1, a2, dict(labels or {}))

    @property
    def top(self) -> int:
        return self.stem[-1]

    @property
    def bottom(self) -> int:
        return self.stem[0]

    def back_graph(self) -> Digraph:
        return Digraph(self.digraph.vertices, self.a2)


def is_nice_willow(w: WillowGraph) -> bool:
    if len(w.stem) < 3:
        return False
    top, below, below2 = w.stem[-1], w.stem[-2], w.stem[-3]
    if (top, below) not in w.a2 or (top, below2) not in w.a2:
        return False
    for u, v in w.a2 - {(top, below), (top, below2)}:
        if {u, v} & {below, below2}:
            return False
    return len(reachable_from(w.back_graph(), top)) == len(w.stem)


def set_cover_gadget(n: int, family: Sequence[Iterable[int]]) -> WillowGraph:
    """The willow built from a set system; labels name each vertex.

    Stem, bottom to top: e_n .. e_1, s_m .. s_1, p, p', r.
    """
    m = len(family)
    e = {j: n - j + 1 for j in range(1, n + 1)}
    s = {i: n + (m - i + 1) for i in range(1, m + 1)}
    p, p2, r = n + m + 1, n + m + 2, n + m + 3
    stem = [e[j] for j in range(n, 0, -1)] + [s[i] for i in range(m, 0, -1)] + [p, p2, r]
    back: set[Arc] = {(r, s[i]) for i in s} | {(r, p), (r, p2)}
    for i, members in enumerate(family, start=1):
        back |= {(s[i], e[j]) for j in members}
    labels = {e[j]: f"e{j}" for j in e} | {s[i]: f"s{i}" for i in s} | {p: "p", p2: "p'", r: "r"}
    return WillowGraph.from_stem(stem, back, labels)


def set_cover_to_willow(sc: SetCoverInstance) -> tuple[WillowGraph, int]:
    """Nice willow with a ``n+m+2-b``-leaf out-branching iff ``sc`` has a cover of size <= b."""
    if sc.b > sc.m - 2:
        raise GraphError(f"reduction assumes b <= m - 2 (b={sc.b}, m={sc.m})")
    return set_cover_gadget(sc.n, sc.family), sc.n + sc.m + 2 - sc.b


def disjoint_union(digraphs: Sequence[Digraph]) -> tuple[Digraph, list[dict[int, int]]]:
    """Relabel the inputs onto consecutive ids 1..N; returns the union and each relabelling."""
    maps: list[dict[int, int]] = []
    verts: set[int] = set()
    arcs: set[Arc] = set()
    offset = 0
    for d in digraphs:
        relabel = {v: offset + i + 1 for i, v in enumerate(d.sorted_vertices())}
        offset += len(relabel)
        maps.append(relabel)
        verts |= set(relabel.values())
        arcs |= {(relabel[u], relabel[v]) for u, v in d.arcs}
    return Digraph(frozenset(verts), frozenset(arcs)), maps


def compose_disjoint_union(instances: Sequence[tuple[Digraph, int]]) -> tuple[Digraph, int]:
    """Composition for k-leaf out-tree: the union is yes iff some part is."""
    if not instances:
        raise GraphError("need at least one instance")
    ks = {k for _, k in instances}
    if len(ks) != 1:
        raise GraphError(f"all instances must share k, got {sorted(ks)}")
    union, _ = disjoint_union([d for d, _ in instances])
    return union, ks.pop()


def pad_willow(w: WillowGraph, b_i: int, b_max: int) -> WillowGraph:
    """Raise the leaf target from ``b_i`` to ``b_max`` by subdividing the top stem arc."""
    if b_i > b_max:
        raise GraphError(f"b_i={b_i} exceeds b_max={b_max}")
    if not is_nice_willow(w):
        raise GraphError("pad_willow needs a nice willow")
    extra = b_max - b_i
    if extra == 0:
        return w
    start = w.digraph.next_id()
    fresh = list(range(start, start + extra))
    stem = list(w.stem[:-1]) + fresh + [w.top]
    back = set(w.a2) | {(w.top, x) for x in fresh}
    labels = dict(w.labels) | {x: f"x{i}" for i, x in enumerate(fresh, start=1)}
    return WillowGraph.from_stem(stem, back, labels)


def build_willow_chain(willows: Sequence[tuple[WillowGraph, int]], b_max: int) -> tuple[Digraph, int]:
    """Chain padded willows top-to-bottom into a cycle; parameter ``b_max + 1``.

    Each entry pairs a willow with its leaf target, which must already be ``b_max``.
    """
    if not willows:
        raise GraphError("need at least one willow")
    for w, b in willows:
        if b != b_max:
            raise GraphError(f"willow target {b} not normalised to b_max={b_max}; use pad_willow")
        if not is_nice_willow(w):
            raise GraphError("every willow in the chain must be nice")
    union, maps = disjoint_union([w.digraph for w, _ in willows])
    tops = [m[w.top] for (w, _), m in zip(willows, maps)]
    bottoms = [m[w.bottom] for (w, _), m in zip(willows, maps)]
    links = {(tops[i], bottoms[(i + 1) % len(tops)]) for i in range(len(tops))}
    return union.with_arcs(links), b_max + 1


def normalize_and_chain(willows: Sequence[tuple[WillowGraph, int]]) -> tuple[Digraph, int]:
    b_max = max(b for _, b in willows)
    padded = [(pad_willow(w, b, b_max), b_max) for w, b in willows]
    return build_willow_chain(padded, b_max)


def random_nice_willow(n: int, rng: random.Random, arc_probability: float = 0.3) -> WillowGraph:
    """Random nice willow on stem 1..n (bottom 1, top n)."""
    if n < 3:
        raise GraphError("a nice willow needs at least 3 vertices")
    stem = list(range(1, n + 1))
    top, below, below2 = n, n - 1, n - 2
    back: set[Arc] = {(top, below), (top, below2)}
    tails = [v for v in stem if v not in (below, below2)]
    for v in range(1, n - 2):
        options = [u for u in tails if u > v]
        picked = [u for u in options if rng.random() < arc_probability]
        if not picked:
            picked = [rng.choice(options)]
        back |= {(u, v) for u in picked}
    return WillowGraph.from_stem(stem, back)
