"""Command line: ``trace-sperner {check,search,la,construct,conjectures}``.

Exit codes: 0 property holds / optimum proven, 1 violation (or only a lower
bound when ``--exact`` was requested), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys

from . import report
from .family import TraceProblem, find_violation
from .formats import (
    FormatError,
    format_family,
    format_poset,
    format_set,
    parse_construction,
    parse_family,
    parse_poset,
    parse_poset_shorthand,
)
from .search import (
    FRONTIER_DEPTH,
    PROVEN,
    SearchBudget,
    heuristic_lower_bound,
    max_p_free,
    max_trace_sperner,
)


class UsageError(Exception):
    pass


def _global_flags(parser: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--format", choices=("json", "csv", "text"), default=d("json"))
    parser.add_argument("--max-seconds", type=float, default=d(600.0))
    parser.add_argument("--max-nodes", type=int, default=d(10**9))
    parser.add_argument("--threads", type=int, default=d(1))
    parser.add_argument("--deterministic", action="store_true", default=d(False))
    parser.add_argument("--seed", type=int, default=d(0))
    parser.add_argument("-v", "--verbose", action="store_true", default=d(False),
                        help="log every improved incumbent to stderr")


def _window_flags(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--l", type=int, help="window size")
    group.add_argument("--lp", type=int, help="number of deleted elements; window size is n - lp")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trace-sperner", description=__doc__.splitlines()[0])
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="test the l-trace k-Sperner property")
    p.add_argument("family", help="family file, '-' for stdin, or a construction shorthand")
    p.add_argument("--k", type=int, required=True)
    _window_flags(p)

    p = sub.add_parser("search", parents=[common], help="compute f(n, k, l)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    _window_flags(p)
    p.add_argument("--witnesses", type=int, default=4)
    p.add_argument("--no-symmetry", action="store_true", help="disable orbit-leader pruning")
    p.add_argument("--heuristic", action="store_true", help="local search lower bound only")
    p.add_argument("--exact", action="store_true", help="exit 1 unless optimality is proven")

    p = sub.add_parser("la", parents=[common], help="compute La(n, P) for a tree poset")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--poset", required=True, help="chain:<k>, tree:h=<h>,c=<c>, or a poset file")
    p.add_argument("--witnesses", type=int, default=4)
    p.add_argument("--no-symmetry", action="store_true")
    p.add_argument("--exact", action="store_true")

    p = sub.add_parser("construct", parents=[common], help="write a named family")
    p.add_argument("shorthand")
    p.add_argument("-o", "--output", help="output path (default stdout)")

    p = sub.add_parser("conjectures", parents=[common], help="tabulate exact values against the conjectures")
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--k-max", type=int, default=3)
    return parser


# ---------------------------------------------------------------- plumbing


def _budget(args) -> SearchBudget:
    try:
        return SearchBudget(
            max_seconds=args.max_seconds,
            max_nodes=args.max_nodes,
            threads=args.threads,
            deterministic=args.deterministic,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _engine_config(args, **extra) -> dict:
    cfg = {
        "deterministic": args.deterministic,
        "frontier_depth": FRONTIER_DEPTH,
        "max_nodes": args.max_nodes,
        "max_seconds": args.max_seconds,
        "seed": args.seed,
    }
    if not args.deterministic:
        # thread count would break byte-stability across worker counts
        cfg["threads"] = args.threads
    cfg.update(extra)
    return cfg


def _window(args, n: int) -> int:
    l = args.l if args.l is not None else n - args.lp
    if not 1 <= l <= n:
        raise UsageError(f"window size must be in 1..{n}, got {l}")
    return l


def _dump_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _dump_csv(rows, columns) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({c: "" if row.get(c) is None else row[c] for c in columns})
    return buf.getvalue()


def _read_family(spec: str):
    if spec == "-":
        return parse_family(sys.stdin.read())
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            return parse_family(fh.read())
    if ":" in spec:
        return parse_construction(spec)
    raise UsageError(f"no such family file: {spec}")


def _read_poset(spec: str):
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            return parse_poset(fh.read())
    return parse_poset_shorthand(spec)


# ---------------------------------------------------------------- commands


def cmd_check(args, out) -> int:
    family = _read_family(args.family)
    l = _window(args, family.n)
    if args.k < 1:
        raise UsageError("--k must be >= 1")
    problem = TraceProblem(family.n, args.k, l)
    v = find_violation(family, problem)
    doc = {"n": family.n, "k": args.k, "l": l, "lp": family.n - l, "size": len(family), "holds": v is None}
    if v is not None:
        doc["violation"] = {
            "window": format_set(v.window),
            "removed": format_set(v.removed),
            "chain": [format_set(m) for m in v.chain],
        }
    if args.format == "json":
        out.write(_dump_json(doc))
    elif args.format == "csv":
        flat = dict(doc)
        if v is not None:
            flat.update(window=doc["violation"]["window"], removed=doc["violation"]["removed"],
                        chain=" < ".join(doc["violation"]["chain"]))
        out.write(_dump_csv([flat], ("n", "k", "l", "lp", "size", "holds", "window", "removed", "chain")))
    else:
        if v is None:
            out.write(f"holds: every {l}-window trace is {args.k}-Sperner\n")
        else:
            out.write(f"violation: window {doc['violation']['window']} "
                      f"(removed {doc['violation']['removed']}) carries a chain of {args.k + 1} traces\n")
            out.write(f"n={family.n}\n")
            out.write("".join(f"{s}\n" for s in doc["violation"]["chain"]))
    return 0 if v is None else 1


RESULT_COLUMNS = ("kind", "n", "k", "l", "lp", "poset", "poset_nodes", "best_size", "status", "nodes_explored", "elapsed_seconds")


def _emit_result(args, out, problem: dict, result, config: dict) -> int:
    doc = {
        "problem": problem,
        "best_size": result.best_size,
        "status": result.status,
        "witnesses": [format_family(w) for w in result.witnesses],
        "nodes_explored": result.nodes_explored,
        "elapsed_seconds": None if args.deterministic else round(result.elapsed, 6),
        "engine_config": config,
    }
    if args.format == "json":
        out.write(_dump_json(doc))
    elif args.format == "csv":
        row = dict(problem)
        row.update((k, doc[k]) for k in ("best_size", "status", "nodes_explored", "elapsed_seconds"))
        out.write(_dump_csv([row], RESULT_COLUMNS))
    else:
        label = ", ".join(f"{k}={v}" for k, v in problem.items())
        out.write(f"{label}: best_size={result.best_size} ({result.status}), "
                  f"{result.nodes_explored} nodes\n")
        if result.witnesses:
            out.write(format_family(result.witnesses[0]))
    if getattr(args, "exact", False) and result.status != PROVEN:
        return 1
    return 0


def cmd_search(args, out) -> int:
    l = _window(args, args.n)
    try:
        problem = TraceProblem(args.n, args.k, l)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    budget = _budget(args)
    if args.heuristic:
        result = heuristic_lower_bound(problem, budget)
        config = _engine_config(args, method="heuristic")
    else:
        result = max_trace_sperner(problem, budget, symmetry=not args.no_symmetry,
                                   max_witnesses=args.witnesses)
        config = _engine_config(args, method="branch-and-bound", symmetry=not args.no_symmetry,
                                witnesses=args.witnesses)
    doc_problem = {"kind": "f", "n": args.n, "k": args.k, "l": l, "lp": args.n - l}
    return _emit_result(args, out, doc_problem, result, config)


def cmd_la(args, out) -> int:
    poset = _read_poset(args.poset)
    budget = _budget(args)
    result = max_p_free(args.n, poset, budget, symmetry=not args.no_symmetry, max_witnesses=args.witnesses)
    config = _engine_config(args, method="branch-and-bound", symmetry=not args.no_symmetry,
                            witnesses=args.witnesses)
    label = format_poset(poset) if os.path.exists(args.poset) else args.poset
    doc_problem = {"kind": "La", "n": args.n, "poset": label, "poset_nodes": poset.node_count}
    return _emit_result(args, out, doc_problem, result, config)


def cmd_construct(args, out) -> int:
    family = parse_construction(args.shorthand)
    text = format_family(family)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def cmd_conjectures(args, out) -> int:
    rows = report.conjecture_rows(args.n_max, args.k_max, _budget(args))
    dicts = [r.as_dict() for r in rows]
    if args.format == "json":
        out.write(_dump_json({"rows": dicts}))
    elif args.format == "csv":
        out.write(_dump_csv(dicts, report.COLUMNS))
    else:
        widths = [max(len(c), *(len(str(d[c] if d[c] is not None else "")) for d in dicts)) if dicts else len(c)
                  for c in report.COLUMNS]
        out.write("  ".join(c.rjust(w) for c, w in zip(report.COLUMNS, widths)) + "\n")
        for d in dicts:
            cells = ("" if d[c] is None else str(d[c]) for c in report.COLUMNS)
            out.write("  ".join(s.rjust(w) for s, w in zip(cells, widths)) + "\n")
    return 0


COMMANDS = {
    "check": cmd_check,
    "search": cmd_search,
    "la": cmd_la,
    "construct": cmd_construct,
    "conjectures": cmd_conjectures,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, FormatError, ValueError) as exc:
        print(f"trace-sperner {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
