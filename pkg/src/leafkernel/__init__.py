"""Kernelization toolkit for rooted k-leaf out-branching and out-tree."""

from ._backend import BACKEND
from .digraph import Digraph, GraphError, OutTree, RootedInstance, Variant
from .kernel import KernelOutcome, decide_unrooted_via_kernels, kernelize_rooted, turing_kernelize
from .rules import ReductionTrace, RuleEvent, RuleId, Verdict, reduce_to_fixpoint
from .solver import decide, max_leaf_out_branching, max_leaf_out_tree

__all__ = [
    "BACKEND",
    "Digraph",
    "GraphError",
    "KernelOutcome",
    "OutTree",
    "ReductionTrace",
    "RootedInstance",
    "RuleEvent",
    "RuleId",
    "Variant",
    "Verdict",
    "decide",
    "decide_unrooted_via_kernels",
    "kernelize_rooted",
    "max_leaf_out_branching",
    "max_leaf_out_tree",
    "reduce_to_fixpoint",
    "turing_kernelize",
]
