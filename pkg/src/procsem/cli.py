"""Command-line front end.

Exit codes: 0 positive verdict, 1 negative verdict, 2 usage or input
error, 3 resource budget exceeded.  Arguments naming a chart are either
``expr:<expression>`` or a path to a chart JSON file.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import chart as chartmod
from .axioms import (MILNER_AXIOMS, SCHEMAS, DerivationFormatError, UnknownAxiom, check_derivation,
                     derivation_from_json, fuzz_soundness)
from .bisim import bisimilar, collapse
from .chart import Chart, ChartError, gc
from .extract import ExtractionError, extract, roundtrip
from .lee import DEFAULT_BUDGET, SearchBudgetExceeded, Witness, check_witness, lee_decide, witness_of
from .semantics import DEFAULT_MAX_STATES, StateLimitExceeded, chart_of, deriv, one_return_less, tm
from .syntax import RegExpSyntaxError, parse, to_string

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


class InputError(Exception):
    pass


def _expr(text: str):
    return parse(text[len("expr:"):] if text.startswith("expr:") else text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None


def load_input(ref: str, max_states: int = DEFAULT_MAX_STATES) -> tuple[Chart, dict]:
    """Resolve an input reference to a chart and any witness levels it embeds."""
    if ref.startswith("expr:"):
        return chart_of(_expr(ref), max_states), {}
    text = _read(ref)
    return chartmod.from_json(text), chartmod.levels_from_json(text)


def _print_chart(c: Chart) -> None:
    print(f"start: {c.start}")
    print(f"vertices: {len(c.vertices)}")
    for v in c.order():
        print(f"  {v}{'  [terminating]' if v in c.terminating else ''}")
    print(f"transitions: {len(c.transitions)}")
    rank = {v: i for i, v in enumerate(c.order())}
    for s, a, t in sorted(c.transitions, key=lambda t: (rank[t[0]], t[1], rank[t[2]])):
        print(f"  {s} -{a}-> {t}")


def _emit_chart(c: Chart, args, levels=None) -> None:
    if args.json:
        print(chartmod.to_json(c, levels))
    elif getattr(args, "dot", False):
        print(chartmod.to_dot(c, levels), end="")
    else:
        _print_chart(c)


def _emit_json(obj) -> None:
    print(json.dumps(obj, indent=2, ensure_ascii=False))


# -- subcommands ---------------------------------------------------------------------


def cmd_parse(args) -> int:
    e = _expr(args.expr)
    if args.json:
        _emit_json({"expression": to_string(e)})
    else:
        print(to_string(e))
    return EXIT_OK


def cmd_chart(args) -> int:
    _emit_chart(chart_of(_expr(args.expr), args.max_states), args)
    return EXIT_OK


def cmd_deriv(args) -> int:
    targets = sorted(to_string(d) for d in deriv(args.letter, _expr(args.expr)))
    if args.json:
        _emit_json({"letter": args.letter, "derivatives": targets})
    else:
        for t in targets:
            print(t)
    return EXIT_OK


def cmd_tm(args) -> int:
    value = tm(_expr(args.expr))
    if args.json:
        _emit_json({"tm": value})
    else:
        print(value)
    return EXIT_OK


def cmd_orl(args) -> int:
    verdict = one_return_less(_expr(args.expr))
    if args.json:
        _emit_json({"one_return_less": verdict})
    else:
        print(str(verdict).lower())
    return EXIT_OK if verdict else EXIT_NEGATIVE


def cmd_bisim(args) -> int:
    g, _ = load_input(args.left, args.max_states)
    h, _ = load_input(args.right, args.max_states)
    result = bisimilar(g, h)
    if args.json:
        _emit_json({"bisimilar": result.related, "relation": sorted(map(list, result.relation)),
                    "reason": result.reason})
    elif result:
        print("bisimilar")
        for v, w in sorted(result.relation):
            print(f"  {v} ~ {w}")
    else:
        print(f"not bisimilar: {result.reason}")
    return EXIT_OK if result else EXIT_NEGATIVE


def cmd_collapse(args) -> int:
    g, _ = load_input(args.input, args.max_states)
    result = collapse(g)
    _emit_chart(result.quotient, args)
    if not args.json and not args.dot:
        print("mapping:")
        for v in g.order():
            print(f"  {v} -> {result.mapping[v]}")
    return EXIT_OK


def cmd_lee(args) -> int:
    g, _ = load_input(args.input, args.max_states)
    g = gc(g)
    trace = lee_decide(g, args.budget)
    if trace is None:
        if args.json:
            _emit_json({"lee": False})
        else:
            print("LEE fails: no loop elimination reaches a chart without infinite traces")
        return EXIT_NEGATIVE
    w = witness_of(g, trace)
    if args.witness_out:
        Path(args.witness_out).write_text(chartmod.to_json(g, w.levels) + "\n", encoding="utf-8")
    if args.json:
        print(chartmod.to_json(g, w.levels))
    elif args.dot:
        print(chartmod.to_dot(g, w.levels), end="")
    else:
        print(f"LEE holds ({len(trace.steps)} elimination steps)")
        for k, step in enumerate(trace.steps, 1):
            entries = ", ".join(f"{s} -{a}-> {t}" for s, a, t in sorted(step.entries))
            print(f"  [{k}] at {step.vertex}: {entries}")
    return EXIT_OK


def _witness_for(g: Chart, levels: dict, budget: int) -> Optional[Witness]:
    if levels:
        w = Witness(g, levels)
        if not check_witness(w):
            raise InputError("supplied witness is not a valid LEE witness for this chart")
        return w
    trace = lee_decide(g, budget)
    return None if trace is None else witness_of(g, trace)


def cmd_extract(args) -> int:
    g, levels = load_input(args.input, args.max_states)
    g = gc(g)
    if args.witness:
        text = _read(args.witness)
        levels = chartmod.levels_from_json(text)
    w = _witness_for(g, levels, args.budget)
    if w is None:
        print("LEE fails: no witness, nothing to extract")
        return EXIT_NEGATIVE
    e = extract(g, w)
    if args.json:
        _emit_json({"expression": to_string(e)})
    else:
        print(to_string(e))
    return EXIT_OK


def cmd_expressible(args) -> int:
    g, _ = load_input(args.input, args.max_states)
    q = collapse(g).quotient
    trace = lee_decide(q, args.budget)
    if trace is None:
        report = {"expressible": False, "reason": "collapse does not satisfy LEE"}
    else:
        e = extract(q, witness_of(q, trace))
        report = {"expressible": True, "expression": to_string(e),
                  "one_return_less": one_return_less(e)}
    if args.json:
        _emit_json(report)
    elif report["expressible"]:
        print("expressible by a 1-return-less expression")
        print(f"expression: {report['expression']}")
    else:
        print(f"not expressible: {report['reason']}")
    return EXIT_OK if report["expressible"] else EXIT_NEGATIVE


def cmd_check_proof(args) -> int:
    d = derivation_from_json(_read(args.file))
    result = check_derivation(d)
    if args.json:
        _emit_json({"valid": result.ok, "path": list(result.path), "message": result.message})
    elif result:
        print(f"valid: {d.equation()} ({d.size()} nodes)")
    else:
        path = "/".join(map(str, result.path)) or "root"
        print(f"invalid at {path}: {result.message}")
    return EXIT_OK if result else EXIT_NEGATIVE


def cmd_fuzz_axioms(args) -> int:
    names = [args.axiom] if args.axiom else list(MILNER_AXIOMS)
    for name in names:
        if name not in SCHEMAS:
            raise UnknownAxiom(name)
    reports = [fuzz_soundness(name, args.n, args.seed) for name in names]
    if args.json:
        _emit_json([{
            "axiom": r.axiom, "trials": r.trials, "seed": r.seed,
            "failures": [{"trial": f.trial, "subst": {k: to_string(v) for k, v in f.subst.items()},
                          "lhs": to_string(f.lhs), "rhs": to_string(f.rhs), "reason": f.reason}
                         for f in r.failures],
        } for r in reports])
    else:
        for r in reports:
            print(f"{r.axiom}: {len(r.failures)}/{r.trials} unsound instances")
            for f in r.failures[:args.show]:
                print(f"  trial {f.trial}: {to_string(f.lhs)} = {to_string(f.rhs)}  ({f.reason})")
    return EXIT_NEGATIVE if any(r.failures for r in reports) else EXIT_OK


def cmd_roundtrip(args) -> int:
    report = roundtrip(_expr(args.expr), args.budget)
    if args.json:
        _emit_json({
            "input": to_string(report.expression),
            "lee": report.witness is not None,
            "extracted": to_string(report.extracted) if report.extracted is not None else None,
            "bisimilar": report.bisimilar,
            "one_return_less": report.one_return_less,
        })
    else:
        print("\n".join(report.lines()))
    return EXIT_OK if report.ok else EXIT_NEGATIVE


# -- argument parsing ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES,
                        help="cap on states when building a chart from an expression")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="node budget for the LEE backtracking search")

    parser = argparse.ArgumentParser(prog="procsem", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=func)
        return p

    add("parse", cmd_parse, "parse and print an expression").add_argument("expr")
    p = add("chart", cmd_chart, "chart of an expression")
    p.add_argument("expr")
    p.add_argument("--dot", action="store_true")
    p = add("deriv", cmd_deriv, "partial derivatives by one letter")
    p.add_argument("expr")
    p.add_argument("--letter", required=True)
    add("tm", cmd_tm, "termination bit").add_argument("expr")
    add("orl", cmd_orl, "is the expression 1-return-less").add_argument("expr")
    p = add("bisim", cmd_bisim, "decide bisimilarity")
    p.add_argument("left")
    p.add_argument("right")
    p = add("collapse", cmd_collapse, "bisimulation collapse")
    p.add_argument("input")
    p.add_argument("--dot", action="store_true")
    p = add("lee", cmd_lee, "decide LEE and print a witness")
    p.add_argument("input")
    p.add_argument("--witness-out", metavar="FILE")
    p.add_argument("--dot", action="store_true")
    p = add("extract", cmd_extract, "extract an expression from a LEE chart")
    p.add_argument("input")
    p.add_argument("--witness", metavar="FILE", help="chart JSON carrying a witness array")
    add("expressible", cmd_expressible, "collapse, then LEE").add_argument("input")
    add("check-proof", cmd_check_proof, "check a derivation JSON file").add_argument("file")
    p = add("fuzz-axioms", cmd_fuzz_axioms, "random soundness check of the axioms")
    p.add_argument("--axiom", help="single axiom (default: all of Milner's system)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--show", type=int, default=3, help="failures listed per axiom")
    add("roundtrip", cmd_roundtrip, "collapse, LEE, extract, compare").add_argument("expr")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    try:
        return args.func(args)
    except (StateLimitExceeded, SearchBudgetExceeded) as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (RegExpSyntaxError, ChartError, DerivationFormatError, InputError, ExtractionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except UnknownAxiom as exc:
        print(f"error: unknown axiom {exc.args[0]}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
