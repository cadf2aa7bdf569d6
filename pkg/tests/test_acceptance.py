"""Acceptance battery: each criterion prints one PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -s`` (the summary section
at the end repeats the lines without ``-s``).
"""

from __future__ import annotations

import itertools
import random
from collections.abc import Iterator

from leafkernel.digraph import Digraph, RootedInstance, Variant, reachable_from
from leafkernel.gadgets import (
    SetCoverInstance,
    compose_disjoint_union,
    minimum_cover_size,
    normalize_and_chain,
    pad_willow,
    random_nice_willow,
    set_cover_gadget,
    set_cover_to_willow,
)
from leafkernel.harness import GenSpec, Structure, fixture_corpus, generate, verify_fixtures, verify_rule_safeness
from leafkernel.kernel import decide_unrooted_via_kernels, kernelize_rooted, outcome_decides_yes, size_bound
from leafkernel.rules import Verdict, applicable_rules, reduce_to_fixpoint, replay
from leafkernel.solver import decide, decide_unrooted, max_leaf_any_root, max_leaf_out_branching

from .conftest import ACCEPTANCE_LINES, all_digraphs

SEED = 20240601


def report(number: int, name: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {name} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def random_instances(count: int, max_n: int, seed: int) -> Iterator[tuple[Digraph, int]]:
    rng = random.Random(seed)
    for _ in range(count):
        structure = Structure.RANDOM if rng.random() < 0.3 else Structure.RANDOM_REACHABLE
        g = generate(GenSpec(rng.randint(1, max_n), rng.uniform(0.1, 0.6), rng.getrandbits(64), structure))
        yield g.digraph, g.root


def test_criterion_1_rule_safeness():
    rep = verify_rule_safeness(10_000, 8, SEED)
    applied = sum(rep.applications.values())
    detail = f"{rep.trials} trials + fixtures, {rep.instances} instances, {applied} applications, "
    detail += f"{len(rep.violations)} violations, per rule {dict(sorted(rep.applications.items()))}"
    report(1, "rule safeness", rep.ok and rep.trials >= 10_000, detail)


def test_criterion_2_fixpoint():
    runs = failures = 0
    corpus = list(random_instances(2_000, 8, SEED + 2)) + [(g.digraph, g.root) for g in fixture_corpus(SEED)]
    for d, root in corpus:
        for variant in Variant:
            inst = RootedInstance(d, root, 2, variant)
            red = reduce_to_fixpoint(inst)
            states = replay(inst, red.trace)
            sizes = [(len(s.digraph), len(s.digraph.arcs)) for s in states]
            ok = states[-1] == red.instance and all(b < a for a, b in zip(sizes, sizes[1:]))
            if red.verdict is None:
                ok &= applicable_rules(red.instance) == []
            else:
                ok &= red.verdict is Verdict.NO and reachable_from(d, root) != d.vertices
            runs += 1
            failures += not ok
    report(2, "fixpoint termination, soundness, replay", failures == 0, f"{runs} runs, {failures} failures")


def test_criterion_3_rooted_kernel():
    checked = disagreements = 0
    for d, root in random_instances(3_000, 8, SEED + 3):
        for variant in Variant:
            for k in (1, 2, 3):
                inst = RootedInstance(d, root, k, variant)
                checked += 1
                disagreements += outcome_decides_yes(kernelize_rooted(inst)) != decide(inst)
    arithmetic = size_bound(2) == 12320
    detail = f"{checked} decisions, {disagreements} disagreements, size_bound(2)={size_bound(2)}"
    report(3, "rooted kernelization", disagreements == 0 and arithmetic, detail)


def test_criterion_4_turing_kernel():
    checked = disagreements = 0
    for d, _ in random_instances(1_000, 8, SEED + 4):
        for variant in Variant:
            for k in (1, 2, 3):
                checked += 1
                disagreements += decide_unrooted_via_kernels(d, k, variant) != decide_unrooted(d, k, variant)
    report(4, "turing kernelization", disagreements == 0, f"{checked} decisions, {disagreements} disagreements")


def test_criterion_5_set_cover_gadget():
    families = mismatches = 0
    for n in range(1, 5):
        universe = frozenset(range(1, n + 1))
        subsets = [frozenset(c) for r in range(1, n + 1) for c in itertools.combinations(sorted(universe), r)]
        for m in (3, 4):
            for family in itertools.permutations(subsets, m):
                if frozenset().union(*family) != universe:
                    continue
                families += 1
                best_cover = minimum_cover_size(SetCoverInstance(n, family, 1))
                w = set_cover_gadget(n, family)
                value = max_leaf_out_branching(w.digraph, w.top)[0]
                ok = value == n + m + 2 - best_cover
                for b in range(1, m - 1):
                    _, target = set_cover_to_willow(SetCoverInstance(n, family, b))
                    ok &= (value >= target) == (best_cover <= b)
                mismatches += not ok
    detail = f"{families} ordered covering families (n<=4, 3<=m<=4, all b<=m-2), {mismatches} mismatches"
    report(5, "set cover gadget value", mismatches == 0 and families > 0, detail)


def test_criterion_6_top_is_unique_best_root():
    rng = random.Random(SEED + 6)
    willows = [random_nice_willow(rng.randint(3, 11), rng, rng.uniform(0.1, 0.7)) for _ in range(300)]
    willows += [set_cover_gadget(2, fam) for fam in ([{1}, {2}, {1, 2}], [{1, 2}, {1}, {2}], [{2}, {1}, {1}])]
    willows += [set_cover_gadget(3, [{1, 2}, {2, 3}, {3}, {1}])]
    failures = 0
    for w in willows:
        best = max_leaf_out_branching(w.digraph, w.top)[0]
        for v in w.digraph.vertices - {w.top}:
            got = max_leaf_out_branching(w.digraph, v)
            failures += got is not None and got[0] >= best
    report(6, "nice willow top is the strict unique argmax", failures == 0, f"{len(willows)} willows, {failures} failures")


def test_criterion_7_composition():
    small = [d for n in (1, 2, 3) for d in all_digraphs(n)]
    tiny = [d for n in (1, 2) for d in all_digraphs(n)]
    value = {d: max_leaf_any_root(d, Variant.TREE) for d in small + list(all_digraphs(4))}
    groups = list(itertools.combinations_with_replacement(small, 2))
    groups += [(a, b) for a in all_digraphs(4) for b in tiny]
    groups += list(itertools.combinations_with_replacement(tiny, 3))
    checked = mismatches = 0
    for parts in groups:
        union, _ = compose_disjoint_union([(d, 1) for d in parts])
        union_value = max_leaf_any_root(union, Variant.TREE)
        for k in (1, 2, 3, 4):
            checked += 1
            mismatches += (union_value >= k) != any(value[d] >= k for d in parts)
    report(7, "disjoint union composition", mismatches == 0, f"{len(groups)} unions, {checked} decisions, {mismatches} mismatches")


def test_criterion_8_willow_chain():
    rng = random.Random(SEED + 8)
    chains = mismatches = 0
    outcomes = {True: 0, False: 0}
    for _ in range(300):
        parts = []
        for _ in range(rng.choice((2, 3))):
            w = random_nice_willow(rng.randint(3, 5), rng, rng.uniform(0.2, 0.7))
            top = max_leaf_out_branching(w.digraph, w.top)[0]
            parts.append((w, top + rng.choice((-1, 0, 0, 1, 1)), top))
        parts = [(w, max(b, 1), top) for w, b, top in parts]
        b_max = max(b for _, b, _ in parts)
        expected = any(
            max_leaf_out_branching(p.digraph, p.top, max_n=40)[0] >= b_max
            for p in (pad_willow(w, b, b_max) for w, b, _ in parts)
        )
        chain, k = normalize_and_chain([(w, b) for w, b, _ in parts])
        got = decide_unrooted(chain, k, Variant.BRANCHING, max_n=40)
        chains += 1
        outcomes[expected] += 1
        mismatches += got != expected
    detail = f"{chains} chains ({outcomes[True]} yes, {outcomes[False]} no), {mismatches} mismatches"
    report(8, "willow chain", mismatches == 0 and all(outcomes.values()), detail)


def test_criterion_9_negative_control():
    rep = verify_fixtures(mutant=True, seed=SEED)
    report(9, "mutant rule 4 is detected", len(rep.violations) >= 1, f"{len(rep.violations)} violations on fixtures")
