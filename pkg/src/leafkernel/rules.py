"""Reduction rules 1-5 for rooted k-leaf out-branching / out-tree and the fixpoint driver.

Every detector performs at most one application and returns a :class:`Step`
or None.  None of the rules touch ``k``.
"""

from __future__ import annotations

import enum
import itertools
from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass, field
from typing import Any

from .digraph import (
    Arc,
    Digraph,
    RootedInstance,
    Variant,
    contract_arc,
    dominators,
    is_separator,
    reachable_from,
    unique_out_branching,
)


class RuleId(str, enum.Enum):
    REACHABILITY = "reachability"
    USELESS_ARC = "useless_arc"
    BRIDGE = "bridge"
    AVOIDABLE_ARC = "avoidable_arc"
    TWO_DIRECTIONAL_PATH = "two_directional_path"


class Verdict(str, enum.Enum):
    YES = "yes"
    NO = "no"
    REDUCED = "reduced"


@dataclass(frozen=True)
class RuleEvent:
    """What one rule application matched.

    ``arc`` is the deleted arc (rules 2 and 4) or the contracted arc (rule 3).
    ``removed`` lists deleted vertices (rule 1 on out-trees, the interior of
    the path for rule 5).  ``minted`` holds fresh vertex ids.
    """

    rule: RuleId
    arc: Arc | None = None
    removed: tuple[int, ...] = ()
    minted: tuple[int, ...] = ()
    separator: tuple[int, ...] = ()
    path: tuple[int, ...] = ()
    p_in: int | None = None
    p_out: int | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"rule": self.rule.value}
        if self.arc is not None:
            out["arc"] = list(self.arc)
        for name in ("removed", "minted", "separator", "path"):
            value = getattr(self, name)
            if value:
                out[name] = list(value)
        if self.p_in is not None:
            out["p_in"] = self.p_in
            out["p_out"] = self.p_out
        return out


@dataclass(frozen=True)
class Step:
    instance: RootedInstance
    event: RuleEvent
    verdict: Verdict | None = None


def _fresh(inst: RootedInstance, next_id: int | None) -> int:
    return inst.digraph.next_id() if next_id is None else next_id


def apply_rule1(inst: RootedInstance, *, next_id: int | None = None) -> Step | None:
    """Reachability: unreachable vertices mean No (branchings) or get deleted (out-trees)."""
    d = inst.digraph
    reach = reachable_from(d, inst.root)
    if len(reach) == len(d):
        return None
    gone = tuple(sorted(d.vertices - reach))
    event = RuleEvent(RuleId.REACHABILITY, removed=gone)
    if inst.variant is Variant.BRANCHING:
        return Step(inst, event, Verdict.NO)
    return Step(inst.replace(d.induced(reach)), event)


def apply_rule2(inst: RootedInstance, *, next_id: int | None = None) -> Step | None:
    """Useless arc: drop ``vu`` whenever ``u`` dominates ``v``."""
    d = inst.digraph
    dom = dominators(d, inst.root)
    for v, u in d.sorted_arcs():
        if u in dom[v]:
            event = RuleEvent(RuleId.USELESS_ARC, arc=(v, u), separator=(u,))
            return Step(inst.replace(d.without_arcs([(v, u)])), event)
    return None


def apply_rule3(inst: RootedInstance, *, next_id: int | None = None) -> Step | None:
    """Bridge: contract an arc whose removal cuts off at least two vertices."""
    d = inst.digraph
    r = inst.root
    reach = reachable_from(d, r)
    for u, v in d.sorted_arcs():
        if u not in reach:
            continue
        lost = reach - reachable_from(d, r, skip_arc=(u, v))
        if len(lost) >= 2:
            merged_graph, merged = contract_arc(d, u, v, _fresh(inst, next_id))
            root = merged if r in (u, v) else r
            event = RuleEvent(RuleId.BRIDGE, arc=(u, v), minted=(merged,))
            return Step(inst.replace(merged_graph, root), event)
    return None


def _separator_candidates(d: Digraph, r: int, v: int, w: int, mutant: bool) -> Iterator[tuple[int, ...]]:
    pool = sorted(d.pred[w] - {r, w} - ({v} if not mutant else set()))
    yield from ((x,) for x in pool)
    yield from itertools.combinations(pool, 2)


def _find_rule4(inst: RootedInstance, mutant: bool) -> Step | None:
    d = inst.digraph
    r = inst.root
    for v, w in d.sorted_arcs():
        if v == r:
            continue
        for sep in _separator_candidates(d, r, v, w, mutant):
            if (mutant and v in sep) or is_separator(d, r, sep, v):
                event = RuleEvent(RuleId.AVOIDABLE_ARC, arc=(v, w), separator=sep)
                return Step(inst.replace(d.without_arcs([(v, w)])), event)
    return None


def apply_rule4(inst: RootedInstance, *, next_id: int | None = None) -> Step | None:
    """Avoidable arc: drop ``vw`` when some S of size <= 2, all with arcs into w, separates v."""
    return _find_rule4(inst, mutant=False)


def apply_rule4_mutant(inst: RootedInstance, *, next_id: int | None = None) -> Step | None:
    """Deliberately unsafe Rule 4 letting S contain v; negative control for the harness."""
    return _find_rule4(inst, mutant=True)


@dataclass(frozen=True)
class _PathMatch:
    path: tuple[int, ...]
    p_in: int
    p_out: int

    @property
    def kept(self) -> tuple[int, ...]:
        p = self.path
        return tuple(dict.fromkeys((p[0], self.p_in, self.p_out, p[-1])))

    @property
    def interior(self) -> tuple[int, ...]:
        kept = set(self.kept)
        return tuple(x for x in self.path if x not in kept)


def _candidate_paths(d: Digraph) -> Iterator[tuple[int, ...]]:
    # p_3..p_{l-2} have every arc inside the path, and the path's induced
    # subgraph has in/out-degree <= 2, so those positions have degree <= 2 in D.
    low = {v for v in d.vertices if len(d.pred[v]) <= 2 and len(d.succ[v]) <= 2}
    succ = d.succ

    def extend(path: list[int], on_path: set[int]) -> Iterator[tuple[int, ...]]:
        n = len(path)
        if n == 7:
            yield tuple(path)
        if n == 8:
            if path[5] in low:
                yield tuple(path)
            return
        for y in sorted(succ[path[-1]]):
            if y in on_path or (2 <= n <= 4 and y not in low):
                continue
            path.append(y)
            on_path.add(y)
            yield from extend(path, on_path)
            on_path.discard(y)
            path.pop()

    for start in d.sorted_vertices():
        yield from extend([start], {start})


def _is_exact_path(tree: Any, path: Sequence[int]) -> bool:
    return tree is not None and dict(tree.parent) == {path[i + 1]: path[i] for i in range(len(path) - 1)}


def _match_rule5(d: Digraph, r: int, path: tuple[int, ...]) -> _PathMatch | None:
    on_path = set(path)
    ext_in = {x for x in path if d.pred[x] - on_path}
    ext_out = {x for x in path if d.succ[x] - on_path}
    first, last = path[0], path[-1]
    sub = None
    forward_ok: bool | None = None
    backward: dict[int, Any] = {}
    for p_in in (path[-2], path[-1]):
        if not ext_in <= {first, p_in}:
            continue
        for p_out in (path[0], path[1]):
            if not ext_out <= {last, p_out}:
                continue
            match = _PathMatch(path, p_in, p_out)
            if r in match.interior:
                continue
            if sub is None:
                sub = d.induced(path)
            if forward_ok is None:
                forward_ok = _is_exact_path(unique_out_branching(sub, first), path)
            if not forward_ok:
                return None
            if p_in not in backward:
                q = unique_out_branching(sub, p_in)
                backward[p_in] = q.path_order() if q is not None and q.is_path() else None
            q_order = backward[p_in]
            if q_order is None:
                continue
            if q_order[-1] != p_out:
                continue
            x = path[path.index(p_out) + 1]
            at = q_order.index(last)
            y = q_order[at + 1] if at + 1 < len(q_order) else None
            interior = set(match.interior)
            if y is None or x == y or x not in interior or y not in interior:
                continue
            if _two_path_cover(sub, interior, x, y):
                return match
    return None


def _two_path_cover(d: Digraph, cells: set[int], x: int, y: int) -> bool:
    """Whether ``cells`` splits into two vertex-disjoint paths starting at ``x`` and ``y``."""
    rest = cells - {x, y}

    def grow(ends: tuple[int, int], left: frozenset[int]) -> bool:
        if not left:
            return True
        return any(
            grow((w, ends[1]) if i == 0 else (ends[0], w), left - {w})
            for i, end in enumerate(ends)
            for w in sorted(d.succ[end] & left)
        )

    return grow((x, y), frozenset(rest))


def _replace_path(d: Digraph, match: _PathMatch, u: int, v: int) -> Digraph:
    p = match.path
    trimmed = d.without_vertices(match.interior)
    new_arcs = {(match.p_out, u), (u, v), (v, match.p_in), (p[-1], v), (v, u), (u, p[0])}
    return Digraph(trimmed.vertices | {u, v}, trimmed.arcs | new_arcs)


def apply_rule5(inst: RootedInstance, *, next_id: int | None = None) -> Step | None:
    """Two-directional path: shrink a 7- or 8-vertex two-way path gadget to four vertices plus two."""
    d = inst.digraph
    for path in _candidate_paths(d):
        match = _match_rule5(d, inst.root, path)
        if match is None:
            continue
        u = _fresh(inst, next_id)
        v = u + 1
        event = RuleEvent(
            RuleId.TWO_DIRECTIONAL_PATH,
            removed=match.interior,
            minted=(u, v),
            path=match.path,
            p_in=match.p_in,
            p_out=match.p_out,
        )
        return Step(inst.replace(_replace_path(d, match, u, v)), event)
    return None


Detector = Callable[..., "Step | None"]

RULES: tuple[tuple[RuleId, Detector], ...] = (
    (RuleId.REACHABILITY, apply_rule1),
    (RuleId.USELESS_ARC, apply_rule2),
    (RuleId.BRIDGE, apply_rule3),
    (RuleId.AVOIDABLE_ARC, apply_rule4),
    (RuleId.TWO_DIRECTIONAL_PATH, apply_rule5),
)


@dataclass
class ReductionTrace:
    events: list[RuleEvent] = field(default_factory=list)
    id_map: dict[int, int | None] = field(default_factory=dict)

    @classmethod
    def start(cls, d: Digraph) -> ReductionTrace:
        return cls([], {v: v for v in d.sorted_vertices()})

    def record(self, event: RuleEvent) -> None:
        self.events.append(event)
        gone: set[int] = set(event.removed)
        if event.rule is RuleId.BRIDGE:
            assert event.arc is not None
            merged = event.minted[0]
            self.id_map = {
                k: (merged if cur in event.arc else cur) for k, cur in self.id_map.items()
            }
            return
        if event.rule is RuleId.REACHABILITY or event.rule is RuleId.TWO_DIRECTIONAL_PATH:
            self.id_map = {k: (None if cur in gone else cur) for k, cur in self.id_map.items()}

    def counts(self) -> dict[str, int]:
        out = {rule.value: 0 for rule in RuleId}
        for e in self.events:
            out[e.rule.value] += 1
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "events": [e.to_dict() for e in self.events],
            "id_map": {str(k): v for k, v in sorted(self.id_map.items())},
        }


@dataclass(frozen=True)
class Reduction:
    instance: RootedInstance
    trace: ReductionTrace
    verdict: Verdict | None = None


def reduce_to_fixpoint(
    inst: RootedInstance,
    *,
    max_steps: int | None = None,
    rules: Sequence[tuple[RuleId, Detector]] = RULES,
) -> Reduction:
    """Apply rules 1..5 in priority order, restarting at rule 1 after every hit."""
    trace = ReductionTrace.start(inst.digraph)
    counter = inst.digraph.next_id()
    current = inst
    steps = 0
    while True:
        for _, detect in rules:
            step = detect(current, next_id=counter)
            if step is not None:
                break
        else:
            return Reduction(current, trace)
        trace.record(step.event)
        if step.verdict is Verdict.NO:
            return Reduction(current, trace, Verdict.NO)
        if step.event.minted:
            counter = max(step.event.minted) + 1
        current = step.instance
        steps += 1
        if max_steps is not None and steps >= max_steps:
            return Reduction(current, trace)


def applicable_rules(inst: RootedInstance) -> list[RuleId]:
    return [rule for rule, detect in RULES if detect(inst) is not None]


def apply_event(inst: RootedInstance, event: RuleEvent) -> RootedInstance:
    """Re-apply a recorded event with the graph primitives (no detection)."""
    d = inst.digraph
    if event.rule is RuleId.REACHABILITY:
        return inst.replace(d.without_vertices(event.removed))
    if event.rule in (RuleId.USELESS_ARC, RuleId.AVOIDABLE_ARC):
        assert event.arc is not None
        return inst.replace(d.without_arcs([event.arc]))
    if event.rule is RuleId.BRIDGE:
        assert event.arc is not None
        u, v = event.arc
        merged_graph, merged = contract_arc(d, u, v, event.minted[0])
        return inst.replace(merged_graph, merged if inst.root in event.arc else inst.root)
    assert event.p_in is not None and event.p_out is not None
    match = _PathMatch(event.path, event.p_in, event.p_out)
    return inst.replace(_replace_path(d, match, *event.minted))


def replay(inst: RootedInstance, trace: ReductionTrace) -> list[RootedInstance]:
    """Instances after each event; the original comes first.

    A terminal Reachability event on a branching instance is a verdict, not a rewrite.
    """
    states = [inst]
    for event in trace.events:
        if event.rule is RuleId.REACHABILITY and inst.variant is Variant.BRANCHING:
            break
        states.append(apply_event(states[-1], event))
    return states
