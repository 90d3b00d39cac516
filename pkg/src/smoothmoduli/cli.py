"""Command line entry point.

    smoothmoduli moduli CURVE.json [--format text|json] [--oracle]
    smoothmoduli solve  CURVE.json
    smoothmoduli tree   CURVE.json
    smoothmoduli dot    CURVE.json [--output tree.dot]

Exit status: 0 on success, 1 for bad input, 2 when an internal invariant fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .errors import InputError, InvariantError
from .formats import (
    export_dot,
    parse_curve_file,
    render_report_json,
    render_report_text,
    render_solution_text,
    render_tree_text,
    solution_to_dict,
    tree_to_dict,
)
from .moduli import moduli_count
from .solver import find_admissible, find_admissible_bruteforce, max_brute_default

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smoothmoduli",
        description="Generic number of moduli of a union of smooth plane curve germs.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("curve", help="curve file (JSON), or - for stdin")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--oracle", action="store_true",
                        help="also solve by enumeration and require identical results")
    common.add_argument("--max-brute", type=int, default=None, metavar="N",
                        help="node bound for enumeration (default: $MODULI_MAX_BRUTE or 20)")
    common.add_argument("--output", "-o", metavar="FILE", help="write to FILE instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("moduli", parents=[common], help="per-center table and total number of moduli")
    sub.add_parser("solve", parents=[common], help="admissible solution for the whole curve")
    sub.add_parser("tree", parents=[common], help="cluster tree and proximity matrix")
    sub.add_parser("dot", parents=[common], help="annotated dual tree in Graphviz DOT")
    return parser


def _read(source: str) -> bytes:
    if source == "-":
        return sys.stdin.buffer.read()
    try:
        return Path(source).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc.strerror}") from None


def _execute(args: argparse.Namespace) -> str:
    spec = parse_curve_file(_read(args.curve))
    tree = spec.cluster_tree()
    oracle = args.oracle or spec.options.get("solver") == "oracle"
    max_brute = args.max_brute if args.max_brute is not None else max_brute_default()

    if args.command == "tree":
        if args.format == "json":
            return json.dumps(tree_to_dict(tree), indent=2) + "\n"
        return render_tree_text(tree)

    if args.command == "solve":
        sol = find_admissible(tree)
        if oracle:
            brute = find_admissible_bruteforce(tree, max_brute)
            if brute != [sol]:
                raise InvariantError(f"brute force found {[b.delta for b in brute]}, fast solver {sol.delta}")
        if args.format == "json":
            return json.dumps(solution_to_dict(sol), indent=2, ensure_ascii=False) + "\n"
        return render_solution_text(sol)

    report = moduli_count(tree, oracle=oracle, max_brute=max_brute)
    if args.command == "dot":
        return export_dot(tree, report)
    if args.format == "json":
        return render_report_json(report)
    return render_report_text(tree, report)


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = _execute(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    if args.output:
        Path(args.output).write_text(out, encoding="utf-8")
    else:
        sys.stdout.write(out)
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
