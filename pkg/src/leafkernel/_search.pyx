# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled arborescence search.

Mirrors ``_search_py`` exactly (same visit order, same witnesses); only the
bookkeeping moves into fixed-size C arrays.
"""

cdef enum:
    MAXN = 64


cdef struct Search:
    int n
    int root
    int m
    int order[MAXN]
    int in_deg[MAXN]
    int in_adj[MAXN][MAXN]
    int parent[MAXN]
    int children[MAXN]
    int inner
    int best
    int best_parent[MAXN]
    long long count
    long long limit


cdef int _load(Search* s, int n, int root, in_lists, order) except -1:
    cdef int v, j
    if n > MAXN:
        raise ValueError(f"compiled search supports at most {MAXN} vertices")
    s.n = n
    s.root = root
    s.m = len(order)
    for j in range(s.m):
        s.order[j] = order[j]
    for v in range(n):
        nbrs = in_lists[v]
        s.in_deg[v] = len(nbrs)
        for j in range(s.in_deg[v]):
            s.in_adj[v][j] = nbrs[j]
        s.parent[v] = -1
        s.children[v] = 0
    s.inner = 0
    s.best = -1
    s.count = 0
    s.limit = 0
    return 0


cdef inline bint _closes_cycle(Search* s, int v, int p) noexcept nogil:
    cdef int x = p
    while True:
        if x == v:
            return True
        if x == s.root or s.parent[x] < 0:
            return False
        x = s.parent[x]


cdef void _max_dfs(Search* s, int i) noexcept nogil:
    cdef int v, p, j, leaves
    if i == s.m:
        leaves = s.n - s.inner
        if leaves > s.best:
            s.best = leaves
            for j in range(s.n):
                s.best_parent[j] = s.parent[j]
        return
    if s.n - s.inner <= s.best:
        return
    v = s.order[i]
    for j in range(s.in_deg[v]):
        p = s.in_adj[v][j]
        if _closes_cycle(s, v, p):
            continue
        s.parent[v] = p
        if s.children[p] == 0:
            s.inner += 1
        s.children[p] += 1
        _max_dfs(s, i + 1)
        s.children[p] -= 1
        if s.children[p] == 0:
            s.inner -= 1
        s.parent[v] = -1


cdef void _count_dfs(Search* s, int i) noexcept nogil:
    cdef int v, p, j
    if i == s.m:
        s.count += 1
        return
    v = s.order[i]
    for j in range(s.in_deg[v]):
        p = s.in_adj[v][j]
        if _closes_cycle(s, v, p):
            continue
        s.parent[v] = p
        _count_dfs(s, i + 1)
        s.parent[v] = -1


cdef bint _collect_dfs(Search* s, int i, list found) except -1:
    cdef int v, p, j
    if i == s.m:
        found.append([s.parent[j] for j in range(s.n)])
        return 0 < s.limit <= len(found)
    v = s.order[i]
    for j in range(s.in_deg[v]):
        p = s.in_adj[v][j]
        if _closes_cycle(s, v, p):
            continue
        s.parent[v] = p
        stop = _collect_dfs(s, i + 1, found)
        s.parent[v] = -1
        if stop:
            return True
    return False


def max_leaf(int n, int root, in_lists, order):
    """Best leaf count and parent array over all arborescences rooted at ``root``."""
    cdef Search s
    _load(&s, n, root, in_lists, order)
    with nogil:
        _max_dfs(&s, 0)
    if s.best < 0:
        return None
    return s.best, [s.best_parent[j] for j in range(n)]


def count_arborescences(int n, int root, in_lists, order):
    cdef Search s
    _load(&s, n, root, in_lists, order)
    with nogil:
        _count_dfs(&s, 0)
    return s.count


def collect_arborescences(int n, int root, in_lists, order, long long limit):
    """Parent arrays of the first ``limit`` arborescences (all of them if ``limit <= 0``)."""
    cdef Search s
    cdef list found = []
    _load(&s, n, root, in_lists, order)
    s.limit = limit
    _collect_dfs(&s, 0, found)
    return found
