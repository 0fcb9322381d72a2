"""Command-line front end.

Exit codes: 0 all requested properties hold, 1 a property was falsified,
2 usage error, 3 input/output failure (including resource exhaustion).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .coloring import ColoringRule, parse_rule, rule_name
from .construct import construct, weights
from .interchange import DocumentError, dumps, read_graph, rule_from_meta, write_atomic, write_graph
from .model import MidRule, VariantConfig, VariantKind
from .render import FORMATS, emit_figure
from .verify import (
    SCHEMA_VERSION,
    ResourceExhausted,
    diff_variants,
    rule_exploration,
    sweep,
    verify_graph,
)

EXIT_OK = 0
EXIT_FALSIFIED = 1
EXIT_USAGE = 2
EXIT_IO = 3


class UsageError(Exception):
    pass


def _d_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        bounds = (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from None
    if bounds[0] < 1 or bounds[1] < bounds[0]:
        raise argparse.ArgumentTypeError(f"range must satisfy 1 <= LO <= HI, got {text!r}")
    return bounds


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _variant(kind: str, mid: str) -> VariantConfig:
    return VariantConfig(VariantKind(kind), MidRule(mid))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathforest",
        description="Build, verify and draw the corrected two-path constructions.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    kinds = [k.value for k in VariantKind]
    mids = [m.value for m in MidRule]

    def common(p, *, variant=True, rule=True, d="single"):
        if d == "single":
            p.add_argument("--d", type=_positive, required=True, help="grid dimension")
        elif d == "range":
            p.add_argument("--d-range", type=_d_range, required=True, metavar="LO..HI")
        if variant:
            p.add_argument("--variant", choices=kinds, default=VariantKind.CORRECTED.value)
        p.add_argument("--alt-mid-rule", choices=mids, default=MidRule.UNIFORM_CEIL.value,
                       help="midpoint rule for alternative-s2")
        if rule:
            p.add_argument("--rule", default=ColoringRule.TARGET_DIFF.value,
                           help="built-in rule name or path to a JSON rule table")
        p.add_argument("-o", "--output", type=Path, help="write here instead of stdout")

    p = sub.add_parser("build", help="write the graph interchange document")
    common(p)

    p = sub.add_parser("verify", help="check one construction and write a certificate")
    p.add_argument("--graph", type=Path, help="verify a graph document instead of building one")
    p.add_argument("--d", type=_positive, help="grid dimension (unless --graph)")
    p.add_argument("--variant", choices=kinds, default=VariantKind.CORRECTED.value)
    p.add_argument("--alt-mid-rule", choices=mids, default=MidRule.UNIFORM_CEIL.value)
    p.add_argument("--rule", default=None,
                   help="built-in rule name or JSON rule table (default: target-diff, "
                        "or the rule recorded in --graph)")
    p.add_argument("-o", "--output", type=Path)

    p = sub.add_parser("sweep", help="verify every d in a range")
    common(p, d="range")
    p.add_argument("--workers", type=_positive, default=None,
                   help="process pool size (default: $PATHFOREST_WORKERS or 1)")

    p = sub.add_parser("diff", help="entries added/removed between two variants")
    common(p, variant=False, rule=False)
    p.add_argument("--from", dest="from_variant", choices=kinds, default=VariantKind.ORIGINAL.value)
    p.add_argument("--to", dest="to_variant", choices=kinds, default=VariantKind.CORRECTED.value)

    p = sub.add_parser("explore-rules", help="sweep under every built-in coloring rule")
    common(p, rule=False, d="range")
    p.add_argument("--workers", type=_positive, default=None)

    p = sub.add_parser("render", help="draw the construction")
    common(p)
    p.add_argument("--format", choices=FORMATS, default="dot")
    return parser


def _emit(text: str, output: Path | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        write_atomic(output, text)


def _report_failure(cert: dict) -> None:
    w = cert["first_witness"]
    print(f"FALSIFIED at d={w['d']}: {json.dumps(w)}", file=sys.stderr)
    if cert.get("rule_exploration"):
        passing = cert["rule_exploration"]["passing_rules"]
        print(f"rules holding on this range: {passing or 'none'}", file=sys.stderr)


def _rule(text: str):
    try:
        return parse_rule(text)
    except (ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from None


def cmd_build(args) -> int:
    variant = _variant(args.variant, args.alt_mid_rule)
    rule = _rule(args.rule)
    graph, uncovered = construct(args.d, variant)
    _emit(write_graph(graph, weights(args.d, variant), rule, uncovered), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.graph is not None:
        if args.d is not None:
            raise UsageError("--d and --graph are mutually exclusive")
        graph, table, meta = read_graph(args.graph.read_text(encoding="utf-8"))
        try:
            rule = _rule(args.rule) if args.rule else rule_from_meta(meta)
        except ValueError as exc:
            raise DocumentError("$.rule", str(exc)) from None
        report = verify_graph(graph, meta["uncovered"], rule, table)
        failing = [] if report.passed else [report.d]
        cert = {
            "schema_version": SCHEMA_VERSION,
            "tool_version": __version__,
            "d_range": [graph.d, graph.d],
            "variant": graph.variant.label,
            "rule": rule_name(rule),
            "reports": [report.to_dict()],
            "overall_pass": report.passed,
            "failing_d": failing,
            "first_witness": report.witness(),
            "rule_exploration": None,
            "source": str(args.graph),
        }
    else:
        if args.d is None:
            raise UsageError("one of --d or --graph is required")
        variant = _variant(args.variant, args.alt_mid_rule)
        rule = _rule(args.rule or ColoringRule.TARGET_DIFF.value)
        cert = sweep(args.d, args.d, variant, rule)
    _emit(dumps(cert), args.output)
    if not cert["overall_pass"]:
        _report_failure(cert)
        return EXIT_FALSIFIED
    return EXIT_OK


def cmd_sweep(args) -> int:
    variant = _variant(args.variant, args.alt_mid_rule)
    lo, hi = args.d_range
    cert = sweep(lo, hi, variant, _rule(args.rule), workers=args.workers)
    _emit(dumps(cert), args.output)
    if not cert["overall_pass"]:
        _report_failure(cert)
        return EXIT_FALSIFIED
    return EXIT_OK


def cmd_diff(args) -> int:
    a = _variant(args.from_variant, args.alt_mid_rule)
    b = _variant(args.to_variant, args.alt_mid_rule)
    diff = diff_variants(args.d, a, b)
    doc = {"d": args.d, "from": a.label, "to": b.label, **diff.to_dict()}
    _emit(dumps(doc), args.output)
    return EXIT_OK


def cmd_explore(args) -> int:
    variant = _variant(args.variant, args.alt_mid_rule)
    lo, hi = args.d_range
    doc = rule_exploration(lo, hi, variant, workers=args.workers)
    _emit(dumps(doc), args.output)
    return EXIT_OK


def cmd_render(args) -> int:
    variant = _variant(args.variant, args.alt_mid_rule)
    _emit(emit_figure(args.d, variant, _rule(args.rule), args.format), args.output)
    return EXIT_OK


COMMANDS = {
    "build": cmd_build,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "diff": cmd_diff,
    "explore-rules": cmd_explore,
    "render": cmd_render,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"pathforest: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DocumentError as exc:
        print(f"pathforest: malformed document: {exc}", file=sys.stderr)
        return EXIT_IO
    except ResourceExhausted as exc:
        print(f"pathforest: resource exhaustion (not a property failure): {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"pathforest: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
