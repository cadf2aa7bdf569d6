"""Command-line entry point: ``leafkernel <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from .digraph import GraphError, RootedInstance, Variant
from .dimacs import ParsedGraph, parse_digraph, parse_set_cover, relabel_consecutive, serialize_digraph
from .gadgets import WillowGraph, normalize_and_chain, set_cover_to_willow
from .harness import verify_rule_safeness
from .kernel import outcome_decides_yes, kernelize_rooted, turing_kernelize
from .solver import DEFAULT_MAX_N, max_leaf_out_branching, max_leaf_out_tree


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(f"{self.prog}: error: {message}")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="leafkernel", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def variant_opt(p: argparse.ArgumentParser) -> None:
        p.add_argument("--variant", choices=[v.value for v in Variant], default=Variant.BRANCHING.value)

    def json_opt(p: argparse.ArgumentParser) -> None:
        p.add_argument("--json", action="store_true", help="emit one JSON document")

    p = sub.add_parser("kernelize", help="reduce a rooted instance and apply the size verdict")
    variant_opt(p)
    p.add_argument("--root", type=int)
    p.add_argument("-k", type=int)
    json_opt(p)
    p.add_argument("file")

    p = sub.add_parser("solve", help="exact max-leaf value by brute force")
    variant_opt(p)
    p.add_argument("--root", type=int)
    p.add_argument("-k", type=int)
    p.add_argument("--max-n", type=int, default=DEFAULT_MAX_N)
    json_opt(p)
    p.add_argument("file")

    p = sub.add_parser("turing", help="one rooted kernel per vertex")
    variant_opt(p)
    p.add_argument("-k", type=int, required=True)
    json_opt(p)
    p.add_argument("file")

    p = sub.add_parser("gadget", help="lower-bound constructions")
    gsub = p.add_subparsers(dest="gadget", required=True, parser_class=_Parser)
    g = gsub.add_parser("set-cover", help="willow graph from a Set Cover file")
    json_opt(g)
    g.add_argument("scfile")
    g = gsub.add_parser("chain", help="chain willow files (with 's' stem and 'k' target lines)")
    json_opt(g)
    g.add_argument("files", nargs="+")

    p = sub.add_parser("verify", help="rule-safeness battery against the brute-force oracle")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--max-n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--mutant", action="store_true", help="inject the unsafe Rule 4 variant")
    json_opt(p)
    return parser


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise GraphError(f"cannot read {path}: {exc.strerror}") from None


def _rooted(parsed: ParsedGraph, root: int | None, k: int | None, variant: str) -> RootedInstance:
    root = root if root is not None else parsed.root
    k = k if k is not None else parsed.k
    if root is None:
        raise GraphError("no root given (use --root or an 'r' line)")
    if k is None:
        raise GraphError("no parameter given (use -k or a 'k' line)")
    return RootedInstance(parsed.digraph, root, k, Variant(variant))


def _kernel_text(inst: RootedInstance) -> str:
    d, mapping = relabel_consecutive(inst.digraph)
    comments = ["kernel ids: " + " ".join(f"{new}={old}" for old, new in mapping.items())]
    return serialize_digraph(d, root=mapping[inst.root], k=inst.k, comments=comments)


def _cmd_kernelize(args: argparse.Namespace) -> tuple[int, str, Any]:
    inst = _rooted(parse_digraph(_read(args.file)), args.root, args.k, args.variant)
    outcome = kernelize_rooted(inst)
    lines = [f"verdict {outcome.verdict.value.upper()}", f"size_bound {outcome.size_bound_used}"]
    lines += [f"event {json.dumps(e.to_dict(), sort_keys=True)}" for e in outcome.trace.events]
    if outcome.instance is not None:
        lines.append(f"kernel_vertices {outcome.kernel_size}")
        lines.append(f"kernel_arcs {len(outcome.instance.digraph.arcs)}")
        lines.append(_kernel_text(outcome.instance).rstrip("\n"))
    return 0, "\n".join(lines), outcome.to_dict()


def _tree_lines(parent: dict[int, int]) -> str:
    return " ".join(f"{p}->{v}" for v, p in sorted(parent.items()))


def _cmd_solve(args: argparse.Namespace) -> tuple[int, str, Any]:
    parsed = parse_digraph(_read(args.file))
    variant = Variant(args.variant)
    root = args.root if args.root is not None else parsed.root
    k = args.k if args.k is not None else parsed.k
    d = parsed.digraph
    roots = [root] if root is not None else d.sorted_vertices()
    best: tuple[int, int, dict[int, int]] | None = None
    for r in roots:
        if variant is Variant.TREE:
            found: Any = max_leaf_out_tree(d, r, max_n=args.max_n)
        else:
            found = max_leaf_out_branching(d, r, max_n=args.max_n)
        if found is not None and (best is None or found[0] > best[0]):
            best = (found[0], r, dict(found[1].parent))
    doc: dict[str, Any] = {"variant": variant.value, "rooted": root is not None}
    if best is None:
        lines = ["max_leaves none"]
        doc["max_leaves"] = None
    else:
        lines = [f"max_leaves {best[0]}", f"root {best[1]}", f"witness {_tree_lines(best[2])}"]
        doc |= {"max_leaves": best[0], "root": best[1], "witness": [[p, v] for v, p in sorted(best[2].items())]}
    if k is not None:
        yes = best is not None and best[0] >= k
        lines.append(f"decision {'YES' if yes else 'NO'}")
        doc |= {"k": k, "decision": yes}
    return 0, "\n".join(lines), doc


def _cmd_turing(args: argparse.Namespace) -> tuple[int, str, Any]:
    d = parse_digraph(_read(args.file)).digraph
    results = turing_kernelize(d, args.k, args.variant)
    lines = []
    docs = []
    answer = False
    for root, outcome in results:
        yes = outcome_decides_yes(outcome)
        answer |= yes
        size = outcome.kernel_size
        lines.append(
            f"root {root} verdict {outcome.verdict.value.upper()} "
            f"kernel_vertices {'-' if size is None else size} decides {'YES' if yes else 'NO'}"
        )
        docs.append({"root": root, "decides": yes} | outcome.to_dict())
    lines.append(f"answer {'YES' if answer else 'NO'}")
    return 0, "\n".join(lines), {"k": args.k, "variant": args.variant, "outcomes": docs, "answer": answer}


def _willow_from_file(path: str) -> tuple[WillowGraph, int]:
    parsed = parse_digraph(_read(path))
    if parsed.stem is None or parsed.k is None:
        raise GraphError(f"{path}: willow files need an 's' stem line and a 'k' target line")
    stem = parsed.stem
    a1 = set(zip(stem, stem[1:]))
    if not a1 <= parsed.digraph.arcs:
        raise GraphError(f"{path}: stem is not a path of the digraph")
    return WillowGraph.from_stem(stem, parsed.digraph.arcs - a1), parsed.k


def _cmd_gadget(args: argparse.Namespace) -> tuple[int, str, Any]:
    if args.gadget == "set-cover":
        sc = parse_set_cover(_read(args.scfile))
        w, target = set_cover_to_willow(sc)
        d, mapping = relabel_consecutive(w.digraph)
        names = " ".join(f"{mapping[v]}={w.labels[v]}" for v in w.stem)
        text = serialize_digraph(
            d, root=mapping[w.top], k=target, stem=[mapping[v] for v in w.stem], comments=[f"labels {names}"]
        )
        doc = {"target": target, "top": mapping[w.top], "labels": {mapping[v]: w.labels[v] for v in w.stem}}
    else:
        willows = [_willow_from_file(f) for f in args.files]
        chain, k = normalize_and_chain(willows)
        text = serialize_digraph(chain, k=k)
        doc = {"k": k}
    d2 = parse_digraph(text).digraph
    doc |= {"vertices": len(d2), "arcs": [list(a) for a in d2.sorted_arcs()]}
    return 0, text.rstrip("\n"), doc


def _cmd_verify(args: argparse.Namespace) -> tuple[int, str, Any]:
    if not 1 <= args.max_n <= DEFAULT_MAX_N:
        raise UsageError(f"leafkernel verify: error: --max-n must be in 1..{DEFAULT_MAX_N}")
    report = verify_rule_safeness(args.trials, args.max_n, args.seed, mutant=args.mutant)
    return (0 if report.ok else 1), "\n".join(report.lines()), report.to_dict()


_COMMANDS = {
    "kernelize": _cmd_kernelize,
    "solve": _cmd_solve,
    "turing": _cmd_turing,
    "gadget": _cmd_gadget,
    "verify": _cmd_verify,
}


def run_command(argv: Sequence[str]) -> tuple[int, str]:
    """Run one invocation; returns the exit code and the text that goes to stdout or stderr."""
    try:
        args = _build_parser().parse_args(list(argv))
        code, text, doc = _COMMANDS[args.command](args)
    except UsageError as exc:
        return 2, str(exc)
    except SystemExit as exc:  # --help
        return int(exc.code or 0), ""
    except GraphError as exc:
        return 1, f"error: {exc}"
    if getattr(args, "json", False):
        text = json.dumps(doc, sort_keys=True)
    return code, text


def main(argv: Sequence[str] | None = None) -> int:
    code, text = run_command(sys.argv[1:] if argv is None else argv)
    stream = sys.stderr if code == 2 or text.startswith("error:") else sys.stdout
    print(text, file=stream)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
