from __future__ import annotations

import itertools

import networkx as nx
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st
from networkx.algorithms.tree.branchings import ArborescenceIterator

from leafkernel.digraph import Digraph

settings.register_profile(
    "default", max_examples=150, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@st.composite
def digraphs(draw: st.DrawFn, min_n: int = 1, max_n: int = 6) -> Digraph:
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return Digraph(frozenset(range(1, n + 1)), frozenset(chosen))


def all_digraphs(n: int):
    """Every labelled simple digraph on vertices 1..n."""
    pairs = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v]
    for mask in range(1 << len(pairs)):
        yield Digraph(frozenset(range(1, n + 1)), frozenset(p for i, p in enumerate(pairs) if mask >> i & 1))


def nx_arborescences(d: Digraph, root: int) -> list[frozenset[tuple[int, int]]]:
    """Arc sets of all out-branchings rooted at ``root``, via networkx (independent of the package)."""
    if len(d) == 1:
        return [frozenset()]
    g = nx.DiGraph()
    g.add_nodes_from(d.vertices)
    g.add_edges_from((u, v) for u, v in d.arcs if v != root)
    try:
        return [frozenset(t.edges()) for t in ArborescenceIterator(g)]
    except nx.NetworkXException:  # raised when no spanning arborescence exists
        return []


def nx_max_leaf(d: Digraph, root: int) -> int | None:
    best = None
    for arcs in nx_arborescences(d, root):
        tails = {u for u, _ in arcs}
        leaves = len(d.vertices - tails)
        best = leaves if best is None else max(best, leaves)
    return best


def brute_dominates(d: Digraph, r: int, u: int, v: int) -> bool:
    """Every simple r->v path contains u, by explicit path enumeration."""
    found_any = False
    for length in range(0, len(d)):
        for mid in itertools.permutations(sorted(d.vertices - {r, v}), length):
            walk = (r, *mid, v) if r != v else (r,)
            if all((a, b) in d.arcs for a, b in zip(walk, walk[1:])):
                found_any = True
                if u not in walk:
                    return False
    return found_any


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter) -> None:
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
