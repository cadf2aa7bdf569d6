"""Rooted cubic kernelization and the per-root Turing kernelization for the unrooted problems."""

from __future__ import annotations

from concurrent.futures import Executor
from dataclasses import dataclass
from typing import Any

from .digraph import Digraph, GraphError, RootedInstance, Variant
from .rules import ReductionTrace, Verdict, reduce_to_fixpoint
from .solver import DEFAULT_MAX_N, decide

SIZE_CONSTANT = 1540


def size_bound(k: int) -> int:
    """Vertex count above which a reduced instance is a yes-instance."""
    if k < 1:
        raise GraphError(f"k must be >= 1, got {k}")
    return SIZE_CONSTANT * k**3


@dataclass(frozen=True)
class KernelOutcome:
    verdict: Verdict
    trace: ReductionTrace
    size_bound_used: int
    instance: RootedInstance | None = None

    @property
    def kernel_size(self) -> int | None:
        return None if self.instance is None else len(self.instance.digraph)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "verdict": self.verdict.value,
            "size_bound": self.size_bound_used,
            "trace": self.trace.to_dict(),
        }
        if self.instance is not None:
            d = self.instance.digraph
            out["kernel"] = {
                "root": self.instance.root,
                "k": self.instance.k,
                "vertices": d.sorted_vertices(),
                "arcs": [list(a) for a in d.sorted_arcs()],
            }
        return out


def kernelize_rooted(inst: RootedInstance, *, bound: int | None = None) -> KernelOutcome:
    """Reduce to a fixpoint, then answer Yes if the reduced graph is still too large.

    ``bound`` overrides ``1540 k^3``; only tests should need that.
    """
    limit = size_bound(inst.k) if bound is None else bound
    reduction = reduce_to_fixpoint(inst)
    if reduction.verdict is Verdict.NO:
        return KernelOutcome(Verdict.NO, reduction.trace, limit)
    if len(reduction.instance.digraph) > limit:
        return KernelOutcome(Verdict.YES, reduction.trace, limit)
    return KernelOutcome(Verdict.REDUCED, reduction.trace, limit, reduction.instance)


def outcome_decides_yes(outcome: KernelOutcome, *, max_n: int = DEFAULT_MAX_N) -> bool:
    if outcome.verdict is Verdict.YES:
        return True
    if outcome.verdict is Verdict.NO:
        return False
    assert outcome.instance is not None
    return decide(outcome.instance, max_n=max_n)


def turing_kernelize(
    d: Digraph, k: int, variant: Variant | str = Variant.BRANCHING, *, executor: Executor | None = None
) -> list[tuple[int, KernelOutcome]]:
    """One rooted kernel per vertex, listed by root id."""
    variant = Variant(variant)
    instances = [RootedInstance(d, v, k, variant) for v in d.sorted_vertices()]
    if executor is None:
        outcomes = [kernelize_rooted(i) for i in instances]
    else:
        outcomes = list(executor.map(kernelize_rooted, instances))
    return [(i.root, o) for i, o in zip(instances, outcomes)]


def decide_unrooted_via_kernels(
    d: Digraph, k: int, variant: Variant | str = Variant.BRANCHING, *, max_n: int = DEFAULT_MAX_N
) -> bool:
    return any(outcome_decides_yes(o, max_n=max_n) for _, o in turing_kernelize(d, k, variant))
