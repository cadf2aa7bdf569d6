"""Instance generation and the rule-safeness battery that checks every rule against the oracle."""

from __future__ import annotations

import enum
import random
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Any

from .digraph import Digraph, RootedInstance, Variant, reachable_from
from .gadgets import random_nice_willow
from .rules import (
    RULES,
    Detector,
    RuleId,
    apply_rule1,
    apply_rule2,
    apply_rule3,
    apply_rule4,
    apply_rule4_mutant,
    apply_rule5,
    reduce_to_fixpoint,
    replay,
)
from .solver import DEFAULT_MAX_N, max_leaf_value


class Structure(str, enum.Enum):
    RANDOM = "random"
    RANDOM_REACHABLE = "random_reachable"
    BIDIR_PATH = "bidir_path"
    WILLOW = "willow"


@dataclass(frozen=True)
class GenSpec:
    n: int
    arc_probability: float = 0.3
    seed: int = 0
    structure: Structure = Structure.RANDOM


@dataclass(frozen=True)
class Generated:
    digraph: Digraph
    root: int


def generate(spec: GenSpec) -> Generated:
    """Deterministic digraph for ``spec``; vertex 1 is the root except for willows (top)."""
    if spec.n < 1:
        raise ValueError("n must be >= 1")
    rng = random.Random(spec.seed)
    structure = Structure(spec.structure)
    if structure is Structure.WILLOW:
        w = random_nice_willow(max(spec.n, 3), rng, spec.arc_probability)
        return Generated(w.digraph, w.top)
    if structure is Structure.BIDIR_PATH:
        return _bidir_path_fixture(spec.n, spec.arc_probability, rng)
    verts = range(1, spec.n + 1)
    arcs = {(u, v) for u in verts for v in verts if u != v and rng.random() < spec.arc_probability}
    d = Digraph(frozenset(verts), frozenset(arcs))
    if structure is Structure.RANDOM_REACHABLE:
        d = _make_reachable(d, 1, rng)
    return Generated(d, 1)


def _make_reachable(d: Digraph, root: int, rng: random.Random) -> Digraph:
    reach = set(reachable_from(d, root))
    arcs = set(d.arcs)
    for v in d.sorted_vertices():
        if v in reach:
            continue
        arcs.add((rng.choice(sorted(reach)), v))
        d = Digraph(d.vertices, frozenset(arcs))
        reach = set(reachable_from(d, root))
    return d


def _bidir_path_fixture(n: int, p: float, rng: random.Random) -> Generated:
    # Root 1, two-way path on 2..l+1, extras after it.  Outside arcs only touch
    # p_1 and p_l (in), p_l and p_out (out), so the path rule can match.
    l = 8 if n >= 10 and rng.random() < 0.5 else 7
    n = max(n, l + 1)
    root = 1
    path = list(range(2, l + 2))
    extras = list(range(l + 2, n + 1))
    arcs: set[tuple[int, int]] = set()
    for a, b in zip(path, path[1:]):
        arcs |= {(a, b), (b, a)}
    first, last = path[0], path[-1]
    p_out = rng.choice([first, path[1]])
    outside = [root] + extras
    arcs.add((root, first))
    for x in outside:
        if rng.random() < p:
            arcs.add((x, last))
        if x != root and rng.random() < p:
            arcs.add((x, first))
        if rng.random() < p:
            arcs.add((last, x))
        if rng.random() < p:
            arcs.add((p_out, x))
    for a in outside:
        for b in extras:
            if a != b and rng.random() < p:
                arcs.add((a, b))
    d = Digraph(frozenset([root] + path + extras), frozenset(arcs))
    return Generated(_make_reachable(d, root, rng), root)


def fixture_corpus(seed: int = 0, bidir_count: int = 60, willow_count: int = 10) -> list[Generated]:
    """Hand-built per-rule fixtures plus randomized path-rule and willow fixtures."""
    hand = [
        [(1, 2), (2, 3), (3, 2)],  # useless arc
        [(1, 2), (2, 1)],  # arc into the root
        [(1, 2), (2, 3), (3, 4)],  # bridge
        [(1, 2), (2, 3), (2, 4), (3, 4)],  # avoidable arc, |S| = 1
        [(1, 2), (1, 3), (2, 4), (3, 4), (2, 5), (3, 5), (4, 5)],  # avoidable arc, |S| = 2
        [(1, 2), (3, 2)],  # unreachable vertex
    ]
    corpus = [Generated(Digraph.from_arcs(arcs), 1) for arcs in hand]
    path7 = [(a, b) for a in range(2, 8) for b in (a + 1,)]
    two_way = path7 + [(b, a) for a, b in path7]
    spec_example = two_way + [(1, 2), (1, 8), (2, 9), (8, 9)]
    corpus.append(Generated(Digraph.from_arcs(spec_example), 1))
    rng = random.Random(seed)
    for _ in range(bidir_count):
        spec = GenSpec(rng.randint(8, 12), rng.uniform(0.1, 0.4), rng.getrandbits(64), Structure.BIDIR_PATH)
        corpus.append(generate(spec))
    for _ in range(willow_count):
        spec = GenSpec(rng.randint(3, 8), rng.uniform(0.2, 0.6), rng.getrandbits(64), Structure.WILLOW)
        corpus.append(generate(spec))
    return corpus


@dataclass(frozen=True)
class Violation:
    trial: str
    rule: str
    variant: str
    before: int | None
    after: int | None
    arcs: tuple[tuple[int, int], ...]
    root: int

    def line(self) -> str:
        return (
            f"VIOLATION trial={self.trial} rule={self.rule} variant={self.variant} "
            f"before={self.before} after={self.after} root={self.root} arcs={list(self.arcs)}"
        )


@dataclass
class SafenessReport:
    trials: int = 0
    instances: int = 0
    applications: Counter[str] = field(default_factory=Counter)
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def merge(self, other: SafenessReport) -> SafenessReport:
        return SafenessReport(
            self.trials + other.trials,
            self.instances + other.instances,
            self.applications + other.applications,
            self.violations + other.violations,
        )

    def lines(self) -> list[str]:
        out = [f"trials {self.trials}", f"instances {self.instances}"]
        for rule in RuleId:
            out.append(f"rule {rule.value} applications {self.applications.get(rule.value, 0)}")
        out.extend(v.line() for v in self.violations)
        out.append(f"violations {len(self.violations)}")
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "trials": self.trials,
            "instances": self.instances,
            "applications": {rule.value: self.applications.get(rule.value, 0) for rule in RuleId},
            "violations": [v.__dict__ | {"arcs": [list(a) for a in v.arcs]} for v in self.violations],
            "ok": self.ok,
        }


def _value(inst: RootedInstance, max_n: int) -> int | None:
    return max_leaf_value(inst, max_n=max_n)


def check_instance(
    d: Digraph,
    root: int,
    report: SafenessReport,
    label: str,
    *,
    mutant: bool = False,
    max_n: int = DEFAULT_MAX_N,
) -> None:
    """Apply each rule once, then walk the fixpoint, comparing oracle values at every step."""
    report.instances += 1

    def note(rule: RuleId, variant: Variant, before: RootedInstance, after: RootedInstance | None) -> None:
        report.applications[rule.value] += 1
        b = _value(before, max_n)
        a = None if after is None else _value(after, max_n)
        if a != b:
            report.violations.append(
                Violation(label, rule.value, variant.value, b, a, tuple(before.digraph.sorted_arcs()), before.root)
            )

    for variant in Variant:
        inst = RootedInstance(d, root, 1, variant)
        step = apply_rule1(inst)
        if step is not None:
            # A No verdict is right exactly when no branching exists.
            note(RuleId.REACHABILITY, variant, inst, None if step.verdict else step.instance)

    base = d.induced(reachable_from(d, root))
    detectors: Sequence[tuple[RuleId, Detector]] = [
        (RuleId.USELESS_ARC, apply_rule2),
        (RuleId.BRIDGE, apply_rule3),
        (RuleId.AVOIDABLE_ARC, apply_rule4_mutant if mutant else apply_rule4),
        (RuleId.TWO_DIRECTIONAL_PATH, apply_rule5),
    ]
    for variant in Variant:
        inst = RootedInstance(base, root, 1, variant)
        for rule, detect in detectors:
            step = detect(inst)
            if step is not None:
                note(rule, variant, inst, step.instance)

    pipeline = list(RULES)
    if mutant:
        pipeline[3] = (RuleId.AVOIDABLE_ARC, apply_rule4_mutant)
    start = RootedInstance(base, root, 1, Variant.BRANCHING)
    reduction = reduce_to_fixpoint(start, rules=pipeline)
    states = replay(start, reduction.trace)
    for event, before, after in zip(reduction.trace.events, states, states[1:]):
        note(event.rule, Variant.BRANCHING, before, after)


def verify_rule_safeness(
    trials: int,
    max_n: int,
    seed: int,
    *,
    fixtures: Iterable[Generated] | None = None,
    mutant: bool = False,
) -> SafenessReport:
    """Random trials with ``1 <= n <= max_n`` plus the fixture corpus (none when ``trials == 0``)."""
    report = SafenessReport()
    if trials <= 0:
        return report
    if max_n > DEFAULT_MAX_N:
        raise ValueError(f"max_n must not exceed the solver bound {DEFAULT_MAX_N}")
    rng = random.Random(seed)
    for t in range(trials):
        structure = Structure.RANDOM if rng.random() < 0.2 else Structure.RANDOM_REACHABLE
        spec = GenSpec(rng.randint(1, max_n), rng.uniform(0.1, 0.6), rng.getrandbits(64), structure)
        g = generate(spec)
        check_instance(g.digraph, g.root, report, f"t{t}", mutant=mutant)
        report.trials += 1
    corpus = fixture_corpus(seed) if fixtures is None else list(fixtures)
    for i, g in enumerate(corpus):
        check_instance(g.digraph, g.root, report, f"f{i}", mutant=mutant)
    return report


def verify_fixtures(*, mutant: bool = False, seed: int = 0) -> SafenessReport:
    report = SafenessReport()
    for i, g in enumerate(fixture_corpus(seed)):
        check_instance(g.digraph, g.root, report, f"f{i}", mutant=mutant)
    return report
