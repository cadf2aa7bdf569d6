"""Time the compiled search kernel against its pure-Python twin.

    python benchmarks/bench_search.py [--sizes 8 9 10 11] [--density 0.5] [--graphs 20]

Both backends get the same random digraphs (root 1, everything reachable) and
must return identical results; the table lists seconds per graph.
"""

from __future__ import annotations

import argparse
import random
import time
from collections.abc import Callable

from leafkernel import _search_py
from leafkernel.digraph import Digraph, _Indexed

try:
    from leafkernel import _search as _compiled
except ImportError:  # extension not built
    _compiled = None


def _workload(n: int, density: float, count: int, seed: int) -> list[tuple]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        arcs = [(u, v) for u in range(1, n + 1) for v in range(1, n + 1) if u != v and rng.random() < density]
        idx = _Indexed(Digraph(frozenset(range(1, n + 1)), frozenset(arcs)), 1)
        if idx.reaches_all:
            out.append((len(idx.ids), idx.root, idx.in_lists, idx.order))
    return out


def _time(fn: Callable, graphs: list[tuple]) -> tuple[float, list]:
    start = time.perf_counter()
    results = [fn(*g) for g in graphs]
    return (time.perf_counter() - start) / len(graphs), results


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[7, 8, 9, 10])
    ap.add_argument("--density", type=float, default=0.5)
    ap.add_argument("--graphs", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if _compiled is None:
        print("compiled extension not available; only the pure-Python twin would run")
        return
    print(f"{'kernel':<22}{'n':>4}{'python s':>12}{'compiled s':>12}{'speedup':>10}")
    for n in args.sizes:
        graphs = _workload(n, args.density, args.graphs, args.seed + n)
        for name in ("max_leaf", "count_arborescences"):
            py_t, py_r = _time(getattr(_search_py, name), graphs)
            c_t, c_r = _time(getattr(_compiled, name), graphs)
            if py_r != c_r:
                raise SystemExit(f"backends disagree on {name} at n={n}")
            print(f"{name:<22}{n:>4}{py_t:>12.5f}{c_t:>12.5f}{py_t / max(c_t, 1e-9):>9.1f}x")


if __name__ == "__main__":
    main()
