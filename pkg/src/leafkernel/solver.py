"""Exact brute-force max-leaf oracles for rooted out-branchings and out-trees.

Three routes to the same numbers, kept independent on purpose:

* :func:`max_leaf_out_branching` runs the depth-first parent-choice search in
  the (optionally compiled) search kernel;
* :func:`enumerate_out_branchings` walks the full product of parent choices
  and rejects cyclic assignments;
* :func:`max_leaf_via_inner_sets` minimises the set of inner vertices over
  vertex subsets and never builds a tree during the search.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterator

from . import _backend
from .digraph import Digraph, GraphError, OutTree, RootedInstance, Variant, _Indexed, reachable_from

DEFAULT_MAX_N = 12


class SolverBoundError(GraphError):
    """The instance exceeds the configured brute-force size bound."""


def _check(d: Digraph, r: int, max_n: int) -> None:
    if r not in d.vertices:
        raise GraphError(f"unknown vertex {r}")
    if len(d) > max_n:
        raise SolverBoundError(f"solver bound is {max_n} vertices, instance has {len(d)}")


def enumerate_out_branchings(d: Digraph, r: int, *, max_n: int = DEFAULT_MAX_N) -> Iterator[OutTree]:
    """Yield every out-branching rooted at ``r`` exactly once.

    Each non-root vertex picks one in-neighbour; assignments whose parent
    relation contains a cycle are discarded.
    """
    _check(d, r, max_n)
    others = [v for v in d.sorted_vertices() if v != r]
    choices = [sorted(d.pred[v]) for v in others]
    for picks in itertools.product(*choices):
        parent = dict(zip(others, picks))
        if _reaches_root(parent, r):
            yield OutTree(r, parent)


def _reaches_root(parent: dict[int, int], r: int) -> bool:
    ok = {r}
    for v in parent:
        trail = []
        x = v
        while x not in ok:
            if x in trail:
                return False
            trail.append(x)
            x = parent[x]
        ok.update(trail)
    return True


def count_out_branchings(d: Digraph, r: int, *, max_n: int = DEFAULT_MAX_N) -> int:
    _check(d, r, max_n)
    idx = _Indexed(d, r)
    if not idx.reaches_all:
        return 0
    return _backend.count_arborescences(len(idx.ids), idx.root, idx.in_lists, idx.order)


def max_leaf_out_branching(
    d: Digraph, r: int, *, max_n: int = DEFAULT_MAX_N
) -> tuple[int, OutTree] | None:
    """Maximum leaf count of an out-branching rooted at ``r`` plus a witness, or None."""
    _check(d, r, max_n)
    idx = _Indexed(d, r)
    if not idx.reaches_all:
        return None
    found = _backend.max_leaf(len(idx.ids), idx.root, idx.in_lists, idx.order)
    if found is None:
        return None
    best, parent = found
    return best, idx.to_tree(parent)


def max_leaf_out_tree(d: Digraph, r: int, *, max_n: int = DEFAULT_MAX_N) -> tuple[int, OutTree]:
    """Maximum leaf count of an out-tree rooted at ``r``.

    Any out-tree grows into an out-branching of the reachable part without
    losing leaves, so this is the branching optimum of that part.
    """
    if r not in d.vertices:
        raise GraphError(f"unknown vertex {r}")
    sub = d.induced(reachable_from(d, r))
    found = max_leaf_out_branching(sub, r, max_n=max_n)
    assert found is not None
    return found


def max_leaf_value(inst: RootedInstance, *, max_n: int = DEFAULT_MAX_N) -> int | None:
    """Variant-appropriate optimum; None when a branching is required but absent."""
    if inst.variant is Variant.TREE:
        return max_leaf_out_tree(inst.digraph, inst.root, max_n=max_n)[0]
    found = max_leaf_out_branching(inst.digraph, inst.root, max_n=max_n)
    return None if found is None else found[0]


def decide(inst: RootedInstance, *, max_n: int = DEFAULT_MAX_N) -> bool:
    value = max_leaf_value(inst, max_n=max_n)
    return value is not None and value >= inst.k


def max_leaf_any_root(d: Digraph, variant: Variant | str, *, max_n: int = DEFAULT_MAX_N) -> int | None:
    """Best value over every choice of root (the unrooted problems)."""
    variant = Variant(variant)
    best: int | None = None
    for v in d.sorted_vertices():
        value = max_leaf_value(RootedInstance(d, v, 1, variant), max_n=max_n)
        if value is not None and (best is None or value > best):
            best = value
    return best


def decide_unrooted(d: Digraph, k: int, variant: Variant | str, *, max_n: int = DEFAULT_MAX_N) -> bool:
    best = max_leaf_any_root(d, variant, max_n=max_n)
    return best is not None and best >= k


def max_leaf_via_inner_sets(d: Digraph, r: int, *, max_n: int = DEFAULT_MAX_N) -> int | None:
    """Independent oracle: ``n - min |I|`` over inner sets ``I``.

    ``I`` must contain ``r``, induce a subgraph in which ``r`` reaches all of
    ``I``, and give every vertex outside ``I`` an in-neighbour in ``I``.
    """
    _check(d, r, max_n)
    n = len(d)
    if n == 1:
        return 1
    ids = d.sorted_vertices()
    bit = {v: 1 << i for i, v in enumerate(ids)}
    full = (1 << n) - 1
    rbit = bit[r]
    out_mask = [sum(bit[w] for w in d.succ[v]) for v in ids]

    def spans(inner: int) -> bool:
        seen = rbit
        frontier = rbit
        while frontier:
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= out_mask[low.bit_length() - 1]
                f ^= low
            frontier = nxt & inner & ~seen
            seen |= frontier
        if seen != inner:
            return False
        covered = inner
        f = inner
        while f:
            low = f & -f
            covered |= out_mask[low.bit_length() - 1]
            f ^= low
        return covered == full

    others = [bit[v] for v in ids if v != r]
    for size in range(0, n):
        for combo in itertools.combinations(others, size):
            if spans(rbit | sum(combo)):
                return n - (size + 1)
    return None
