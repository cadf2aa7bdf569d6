"""Pure-Python arborescence search, used when the compiled extension is absent.

Vertices are dense indices ``0..n-1``.  ``in_lists[v]`` holds the in-neighbours
of ``v``; ``order`` lists every non-root vertex in the order parents are
chosen.  The visit order is part of the contract: the compiled twin in
``_search.pyx`` must return identical witnesses.
"""

from __future__ import annotations

from collections.abc import Sequence


class _Search:
    __slots__ = ("n", "root", "in_lists", "order", "parent", "children", "inner")

    def __init__(self, n: int, root: int, in_lists: Sequence[Sequence[int]], order: Sequence[int]):
        self.n = n
        self.root = root
        self.in_lists = in_lists
        self.order = order
        self.parent = [-1] * n
        self.children = [0] * n
        self.inner = 0

    def closes_cycle(self, v: int, p: int) -> bool:
        parent = self.parent
        root = self.root
        x = p
        while True:
            if x == v:
                return True
            if x == root or parent[x] < 0:
                return False
            x = parent[x]


def max_leaf(
    n: int, root: int, in_lists: Sequence[Sequence[int]], order: Sequence[int]
) -> tuple[int, list[int]] | None:
    """Best leaf count and parent array over all arborescences rooted at ``root``."""
    s = _Search(n, root, in_lists, order)
    m = len(order)
    best = -1
    best_parent: list[int] = []

    def dfs(i: int) -> None:
        nonlocal best, best_parent
        if i == m:
            leaves = n - s.inner
            if leaves > best:
                best = leaves
                best_parent = s.parent[:]
            return
        if n - s.inner <= best:
            return
        v = order[i]
        for p in in_lists[v]:
            if s.closes_cycle(v, p):
                continue
            s.parent[v] = p
            if s.children[p] == 0:
                s.inner += 1
            s.children[p] += 1
            dfs(i + 1)
            s.children[p] -= 1
            if s.children[p] == 0:
                s.inner -= 1
            s.parent[v] = -1

    dfs(0)
    if best < 0:
        return None
    return best, best_parent


def count_arborescences(
    n: int, root: int, in_lists: Sequence[Sequence[int]], order: Sequence[int]
) -> int:
    s = _Search(n, root, in_lists, order)
    m = len(order)

    def dfs(i: int) -> int:
        if i == m:
            return 1
        v = order[i]
        total = 0
        for p in in_lists[v]:
            if s.closes_cycle(v, p):
                continue
            s.parent[v] = p
            total += dfs(i + 1)
            s.parent[v] = -1
        return total

    return dfs(0)


def collect_arborescences(
    n: int, root: int, in_lists: Sequence[Sequence[int]], order: Sequence[int], limit: int
) -> list[list[int]]:
    """Parent arrays of the first ``limit`` arborescences (all of them if ``limit <= 0``)."""
    s = _Search(n, root, in_lists, order)
    m = len(order)
    found: list[list[int]] = []

    def dfs(i: int) -> bool:
        if i == m:
            found.append(s.parent[:])
            return 0 < limit <= len(found)
        v = order[i]
        for p in in_lists[v]:
            if s.closes_cycle(v, p):
                continue
            s.parent[v] = p
            stop = dfs(i + 1)
            s.parent[v] = -1
            if stop:
                return True
        return False

    dfs(0)
    return found
