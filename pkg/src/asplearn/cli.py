"""Command-line front end.

    asplearn learn task.las [--algorithm ilasp3] [--stats] [--solutions N] ...

Prints the learned program one rule per line (so the output is itself a
valid program file); statistics lines are prefixed with `%`.  Exit codes:
0 a solution was printed, 1 the task is unsatisfiable in its rule space,
2 parse or bias error, 3 a resource budget was exceeded.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time

from .bias import BiasError, build_rule_space
from .learners import NoiseUnsupported, OracleRefused, ResourceExceeded, run_learner
from .model import INFINITE, render
from .parser import ParseError, parse_task

ALGORITHMS = ("ilasp1", "ilasp2", "ilasp2i", "ilasp3", "oracle")


def _build_arg_parser():
    ap = argparse.ArgumentParser(prog="asplearn",
                                 description="learn answer set programs from examples")
    sub = ap.add_subparsers(dest="command", required=True)
    learn = sub.add_parser("learn", help="solve a learning task file")
    learn.add_argument("file", help="task file (rules, mode declarations, examples)")
    learn.add_argument("--algorithm", choices=ALGORITHMS, default="ilasp3")
    learn.add_argument("--max-body", type=int, metavar="N",
                       help="max body literals per learned rule (default 3)")
    learn.add_argument("--max-vars", type=int, metavar="N",
                       help="max variables per learned rule (default 3, or #maxv)")
    learn.add_argument("--max-rule-length", type=int, metavar="N")
    learn.add_argument("--enable", action="append", default=[], metavar="KINDS",
                       help="comma list out of: constraints, choice, weak, comparisons")
    learn.add_argument("--weak-levels", metavar="L1,L2,...",
                       help="priority levels for learned weak constraints")
    learn.add_argument("--choice-bounds", metavar="LO:HI[,LO:HI...]",
                       help="cardinality bounds for learned choice rules (default 0:1)")
    learn.add_argument("--comparison-ops", metavar="OP[,OP...]",
                       help="comparison operators in learned bodies (default !=)")
    learn.add_argument("--solutions", type=int, default=1, metavar="N",
                       help="enumerate up to N optimal solutions")
    learn.add_argument("--print-rule-space", action="store_true",
                       help="print the generated rule space and exit")
    learn.add_argument("--stats", action="store_true",
                       help="append a %%-prefixed statistics block")
    learn.add_argument("--trace", metavar="PATH",
                       help="write a JSON-lines iteration log")
    learn.add_argument("--timeout", type=float, metavar="SECONDS",
                       help="overall budget; exceeded runs exit with code 3")
    return ap


def _apply_flags(task, args):
    cfg = task.config
    updates = {}
    if args.max_body is not None:
        updates["max_body_literals"] = args.max_body
    if args.max_rule_length is not None:
        updates["max_rule_length"] = args.max_rule_length
    enabled = {kind.strip() for chunk in args.enable for kind in chunk.split(",") if kind.strip()}
    unknown = enabled - {"constraints", "choice", "weak", "comparisons"}
    if unknown:
        raise ValueError(f"unknown --enable kinds: {', '.join(sorted(unknown))}")
    if "constraints" in enabled:
        updates["enable_constraints"] = True
    if "choice" in enabled:
        updates["enable_choice"] = True
    if "weak" in enabled:
        updates["enable_weak"] = True
    if "comparisons" in enabled:
        updates["allow_comparisons"] = True
    if args.weak_levels:
        updates["weak_levels"] = tuple(int(x) for x in args.weak_levels.split(","))
    if args.choice_bounds:
        bounds = []
        for chunk in args.choice_bounds.split(","):
            lo, hi = chunk.split(":")
            bounds.append((int(lo), int(hi)))
        updates["choice_bounds"] = tuple(bounds)
    if args.comparison_ops:
        updates["comparison_ops"] = tuple(args.comparison_ops.split(","))
        updates.setdefault("allow_comparisons", True)
    cfg = dataclasses.replace(cfg, **updates)
    bias = task.mode_bias
    if args.max_vars is not None:
        bias = dataclasses.replace(bias, max_variables=args.max_vars)
    return dataclasses.replace(task, mode_bias=bias, config=cfg)


def _print_stats(result, algorithm):
    stats = result.stats
    print(f"% score: {_fmt(result.score)}")
    print(f"% algorithm: {algorithm}")
    for key in ("rule_space", "iterations", "relevant_examples",
                "violating_reasons", "constraints", "solver_calls"):
        print(f"% {key}: {stats[key]}")


def _fmt(score):
    if score is None:
        return "none"
    if score == INFINITE:
        return "infinite"
    return str(int(score))


def _write_trace(path, result, algorithm):
    with open(path, "w") as fh:
        for entry in result.state.trace:
            fh.write(json.dumps(entry) + "\n")
        fh.write(json.dumps({"event": "done", "algorithm": algorithm,
                             "score": _fmt(result.score),
                             "solutions": len(result.programs),
                             "wall_time": result.stats["wall_time"]}) + "\n")


def main(argv=None) -> int:
    args = _build_arg_parser().parse_args(argv)
    try:
        with open(args.file, encoding="utf-8") as fh:
            source = fh.read()
    except OSError as exc:
        print(f"asplearn: {exc}", file=sys.stderr)
        return 2

    try:
        task = parse_task(source)
        task = _apply_flags(task, args)
        space = build_rule_space(task.mode_bias, task.config)
    except ParseError as exc:
        print(f"{args.file}:{exc.line}:{exc.column}: {exc.kind}: {exc.message}",
              file=sys.stderr)
        return 2
    except (BiasError, ValueError) as exc:
        print(f"asplearn: {exc}", file=sys.stderr)
        return 2

    if args.print_rule_space:
        for i, rule in enumerate(space.rules):
            print(f"% {i}")
            print(rule)
        return 0

    deadline = time.monotonic() + args.timeout if args.timeout else None
    try:
        result = run_learner(task, args.algorithm, space=space,
                             solutions=max(args.solutions, 1), deadline=deadline)
    except NoiseUnsupported as exc:
        print(f"asplearn: {exc}", file=sys.stderr)
        return 2
    except (ResourceExceeded, OracleRefused) as exc:
        print(f"asplearn: {exc}", file=sys.stderr)
        return 3

    if args.trace:
        _write_trace(args.trace, result, args.algorithm)

    if not result.programs:
        print("UNSATISFIABLE")
        return 1

    for i, program in enumerate(result.programs):
        if i:
            print(f"% solution {i + 1}")
        sys.stdout.write(render(program))
    if args.stats:
        _print_stats(result, args.algorithm)
    return 0


if __name__ == "__main__":
    sys.exit(main())
