from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from leafkernel.digraph import Digraph, GraphError
from leafkernel.gadgets import (
    SetCoverInstance,
    WillowGraph,
    build_willow_chain,
    compose_disjoint_union,
    disjoint_union,
    is_nice_willow,
    minimum_cover_size,
    normalize_and_chain,
    pad_willow,
    random_nice_willow,
    set_cover_gadget,
    set_cover_to_willow,
)
from leafkernel.solver import max_leaf_any_root, max_leaf_out_branching

from .conftest import digraphs

D = Digraph.from_arcs
STAR = D([(1, 2), (1, 3), (1, 4)])
PATH = D([(1, 2), (2, 3), (3, 4)])


def top_max(w: WillowGraph) -> int:
    return max_leaf_out_branching(w.digraph, w.top, max_n=30)[0]


class TestSetCover:
    def test_instance_validation(self):
        with pytest.raises(GraphError, match="not in any set"):
            SetCoverInstance(2, ({1},), 1)
        with pytest.raises(GraphError, match="outside"):
            SetCoverInstance(1, ({1, 2},), 1)

    def test_minimum_cover(self):
        assert minimum_cover_size(SetCoverInstance(2, ({1}, {2}, {1, 2}), 1)) == 1
        assert minimum_cover_size(SetCoverInstance(3, ({1}, {2}, {3}, {1, 2}), 1)) == 2

    def test_single_set_gadget(self):
        w = set_cover_gadget(2, [{1, 2}])
        assert sorted(w.labels.values()) == ["e1", "e2", "p", "p'", "r", "s1"]
        assert len(w.digraph) == 6
        assert top_max(w) == 2 + 1 + 2 - 1

    def test_bound_precondition(self):
        with pytest.raises(GraphError, match="b <= m - 2"):
            set_cover_to_willow(SetCoverInstance(1, ({1},), 1))

    def test_three_sets(self):
        sc = SetCoverInstance(2, ({1}, {2}, {1, 2}), 1)
        w, target = set_cover_to_willow(sc)
        assert target == 6
        assert top_max(w) == 6

    def test_ids_and_arcs(self):
        w = set_cover_gadget(2, [{1}, {2}])
        e1, e2, s1, s2, p, p2, r = 2, 1, 4, 3, 5, 6, 7
        assert w.stem == (e2, e1, s2, s1, p, p2, r)
        assert w.a2 == {(r, s1), (r, s2), (r, p), (r, p2), (s1, e1), (s2, e2)}

    def test_is_nice(self):
        assert is_nice_willow(set_cover_to_willow(SetCoverInstance(2, ({1}, {2}, {1, 2}), 1))[0])

    @given(
        st.integers(1, 3).flatmap(
            lambda n: st.tuples(
                st.just(n),
                st.lists(st.frozensets(st.integers(1, n), min_size=1), min_size=1, max_size=4),
            )
        )
    )
    def test_value_formula(self, case):
        n, family = case
        covered = frozenset().union(*family)
        family = [*family, frozenset(range(1, n + 1)) - covered] if covered != set(range(1, n + 1)) else family
        sc = SetCoverInstance(n, tuple(family), 1)
        w = set_cover_gadget(n, sc.family)
        assert top_max(w) == n + sc.m + 2 - minimum_cover_size(sc)


class TestWillow:
    def test_stem_must_be_path(self):
        with pytest.raises(GraphError):
            WillowGraph(D([(1, 2), (2, 3)]), (1, 2, 3), frozenset({(1, 2)}), frozenset({(2, 3)}))

    def test_forward_arc_rejected(self):
        with pytest.raises(GraphError, match="backward"):
            WillowGraph.from_stem([1, 2, 3], [(3, 2), (1, 3)])

    def test_missing_top_arc_is_not_a_willow(self):
        # dropping r -> p' leaves p' without backward in-arcs: two sources in (V, a2)
        w = set_cover_gadget(2, [{1, 2}])
        with pytest.raises(GraphError, match="in-degree-0"):
            WillowGraph.from_stem(w.stem, w.a2 - {(w.top, w.stem[-2])})

    def test_extra_arc_at_second_vertex(self):
        w = WillowGraph.from_stem([1, 2, 3, 4, 5], [(5, 4), (5, 3), (4, 2), (5, 1)])
        assert not is_nice_willow(w)

    def test_too_short(self):
        assert not is_nice_willow(WillowGraph.from_stem([1, 2], [(2, 1)]))

    @given(st.integers(3, 9), st.integers(0, 2**32), st.floats(0.0, 1.0))
    def test_random_nice_willow(self, n, seed, p):
        w = random_nice_willow(n, random.Random(seed), p)
        assert is_nice_willow(w) and w.top == n and w.bottom == 1

    @given(st.integers(3, 7), st.integers(0, 2**32))
    def test_top_is_strict_unique_best_root(self, n, seed):
        w = random_nice_willow(n, random.Random(seed), 0.4)
        best = top_max(w)
        for v in w.digraph.vertices - {w.top}:
            got = max_leaf_out_branching(w.digraph, v)
            assert got is None or got[0] < best


class TestPad:
    def test_no_padding(self):
        w = random_nice_willow(5, random.Random(0))
        assert pad_willow(w, 3, 3) is w

    def test_one_step(self):
        w = random_nice_willow(5, random.Random(0))
        padded = pad_willow(w, 2, 3)
        assert len(padded.digraph) == 6
        (x,) = padded.digraph.vertices - w.digraph.vertices
        assert padded.stem[-2] == x and (w.top, x) in padded.a2
        assert padded.digraph.arcs - w.digraph.arcs == {(w.stem[-2], x), (x, w.top), (w.top, x)}

    def test_rejects(self):
        w = random_nice_willow(4, random.Random(0))
        with pytest.raises(GraphError):
            pad_willow(w, 4, 3)
        with pytest.raises(GraphError, match="nice"):
            pad_willow(WillowGraph.from_stem([1, 2, 3], [(3, 2), (2, 1)]), 1, 2)

    @given(st.integers(3, 6), st.integers(0, 2**32), st.integers(0, 3))
    def test_shifts_top_value(self, n, seed, extra):
        w = random_nice_willow(n, random.Random(seed), 0.4)
        padded = pad_willow(w, 1, 1 + extra)
        assert is_nice_willow(padded)
        assert top_max(padded) == top_max(w) + extra


class TestChain:
    def test_single(self):
        w = random_nice_willow(4, random.Random(1))
        chain, k = build_willow_chain([(w, 3)], 3)
        assert k == 4
        assert chain.arcs == w.digraph.arcs | {(w.top, w.bottom)}

    def test_unnormalised_rejected(self):
        w = random_nice_willow(4, random.Random(1))
        with pytest.raises(GraphError, match="normalised"):
            build_willow_chain([(w, 2), (w, 3)], 3)

    def test_two_links(self):
        a = random_nice_willow(3, random.Random(1))
        chain, k = build_willow_chain([(a, 2), (a, 2)], 2)
        assert len(chain) == 6 and k == 3
        assert {(3, 4), (6, 1)} <= chain.arcs

    def test_yes_and_no(self):
        a = random_nice_willow(4, random.Random(5), 0.5)
        b = random_nice_willow(5, random.Random(6), 0.5)
        va, vb = top_max(a), top_max(b)
        yes_chain, k = normalize_and_chain([(a, va), (b, vb + 1)])
        assert max_leaf_any_root(yes_chain, "branching", max_n=30) >= k
        no_chain, k = normalize_and_chain([(a, va + 1), (b, vb + 1)])
        assert max_leaf_any_root(no_chain, "branching", max_n=30) < k


class TestComposition:
    def test_union_relabels(self):
        union, maps = disjoint_union([STAR, PATH])
        assert union.vertices == frozenset(range(1, 9))
        assert maps[1] == {1: 5, 2: 6, 3: 7, 4: 8}

    def test_single_is_itself(self):
        union, k = compose_disjoint_union([(STAR, 3)])
        assert union == STAR and k == 3

    def test_star_or_path(self):
        union, k = compose_disjoint_union([(STAR, 3), (PATH, 3)])
        assert max_leaf_any_root(union, "tree") >= k

    def test_k_mismatch(self):
        with pytest.raises(GraphError):
            compose_disjoint_union([(STAR, 3), (PATH, 2)])
        with pytest.raises(GraphError):
            compose_disjoint_union([])

    @given(st.lists(digraphs(max_n=4), min_size=1, max_size=3), st.integers(1, 3))
    def test_or_of_parts(self, parts, k):
        union, _ = compose_disjoint_union([(d, k) for d in parts])
        assert (max_leaf_any_root(union, "tree") >= k) == any(max_leaf_any_root(d, "tree") >= k for d in parts)
