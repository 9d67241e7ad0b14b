"""Command line interface.

Exit codes: 0 success, 1 verification failed, 2 invalid input (including a
non-prime p), 3 resource or precision bound exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .decomposition import DEFAULT_DEPTH, decompose, locate, verify_decomposition
from .level_graph import (
    ResourceError,
    build_graph,
    check_prime,
    cycle_census,
    cycle_representatives,
    export_dot,
)
from .lift_engine import CycleAtLevel, an_bn, classify
from .numtheory import DomainError, wieferich_scan
from .padic import PadicInt, PrecisionError

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def cmd_decompose(args) -> int:
    report = decompose(args.p, args.depth, args.precision)
    text = _dump(report.to_json()) if args.format == "json" else report.to_text()
    _emit(text, args.output)
    return EXIT_OK


def cmd_graph(args) -> int:
    g = build_graph(args.p, args.n, args.max_nodes)
    if args.format == "json":
        _emit(_dump(cycle_census(g).to_json()), args.output)
    else:
        _emit(export_dot(g, args.units_only), args.dot or args.output)
    return EXIT_OK


def cmd_classify(args) -> int:
    if args.cycle is not None:
        cycles = [CycleAtLevel.through(args.cycle, args.p, args.n)]
    else:
        g = build_graph(args.p, args.n, args.max_nodes)
        cycles = [CycleAtLevel(args.p, args.n, length, rep)
                  for rep, length in cycle_representatives(g)]
    rows = []
    for c in cycles:
        a, b = an_bn(c)
        rows.append({"rep": str(c.rep), "length": c.length, "a": a,
                     "b": b, "class": str(classify(c))})
    if args.format == "json":
        text = _dump(rows)
    else:
        lines = [f"{'rep':>12} {'length':>8} {'a':>6} {'b':>6}  class"]
        for r in rows:
            b = "-" if r["b"] is None else r["b"]
            lines.append(f"{r['rep']:>12} {r['length']:>8} {r['a']:>6} {b:>6}  {r['class']}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = verify_decomposition(args.p, args.max_level, args.max_seconds, args.max_nodes)
    if args.format == "json":
        text = _dump({
            "p": report.p, "max_level": report.max_level, "ok": report.ok,
            "complete": report.complete,
            "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in report.checks],
        })
    else:
        text = report.to_text()
    _emit(text, args.output)
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_wieferich(args) -> int:
    found = wieferich_scan(args.limit)
    if args.format == "json":
        text = _dump([{"p": w.p, "s": w.s} for w in found])
    else:
        text = "".join(f"{w.p} {w.s}\n" for w in found)
    _emit(text, args.output)
    return EXIT_OK


def cmd_locate(args) -> int:
    check_prime(args.p)
    loc = locate(PadicInt.of(args.x, args.p, args.precision), exact=args.exact)
    text = _dump(loc.to_json()) if args.format == "json" else f"{loc}\n"
    _emit(text, args.output)
    return EXIT_OK


def _env_int(name: str, default):
    value = os.environ.get(name)
    return default if value is None else int(value)


def _env_float(name: str, default):
    value = os.environ.get(name)
    return default if value is None else float(value)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "dot"), default="text")
    common.add_argument("-o", "--output", help="write to FILE instead of stdout")
    common.add_argument("--max-nodes", type=int,
                        default=_env_int("PADICSQUARE_MAX_NODES", None),
                        help="node bound for graph builds (env PADICSQUARE_MAX_NODES)")
    common.add_argument("--max-seconds", type=float,
                        default=_env_float("PADICSQUARE_MAX_SECONDS", None),
                        help="soft deadline, checked between levels (env PADICSQUARE_MAX_SECONDS)")

    parser = argparse.ArgumentParser(
        prog="padicsquare", description="Dynamics of x -> x^2 on the p-adic integers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", parents=[common], help="minimal decomposition report")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    p.add_argument("--precision", type=int, default=None)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("graph", parents=[common], help="functional graph on Z/p^nZ as DOT")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-n", type=int, default=1)
    p.add_argument("--dot", metavar="FILE")
    p.add_argument("--units-only", action="store_true")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("classify", parents=[common], help="lift class of cycles at level n")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-n", type=int, default=1)
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--all", action="store_true")
    which.add_argument("--cycle", type=int, metavar="REP")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", parents=[common], help="check theory against brute force")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("--max-level", type=int, default=3)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("wieferich", parents=[common], help="primes with 2^(p-1) = 1 mod p^2")
    p.add_argument("--limit", type=int, required=True)
    p.set_defaults(func=cmd_wieferich)

    p = sub.add_parser("locate", parents=[common], help="where a p-adic integer lives")
    p.add_argument("-p", type=int, required=True)
    p.add_argument("-x", type=int, required=True)
    p.add_argument("--precision", type=int, default=8)
    p.add_argument("--exact", action="store_true",
                   help="read x as an exact integer rather than a residue")
    p.set_defaults(func=cmd_locate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ResourceError, PrecisionError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
