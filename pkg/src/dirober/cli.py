"""Command-line front end.

Exit codes:
  0  success / PASS
  1  verification FAIL (verify, appendix verify-all)
  2  bad input: unsupported m, unknown entry, bad flags, unparsable document
  3  construct produced a decomposition that failed its own check (a bug)
  4  search budget exhausted
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import dataset
from .assembly import AssemblyError, construct
from .core import ParseError, parse, serialize
from .params import OutOfScope
from .search import SearchBudget, SearchExhausted, search_witness, spec_for
from .verify import verify_decomposition
from .witness import dump_witness, load_witness

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUG, EXIT_EXHAUSTED = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _write(path: str | None, data: bytes):
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(path).write_bytes(data)


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def cmd_construct(args) -> int:
    m = args.m
    if m % 2 == 0:
        return _fail(f"m must be odd (got {m})", EXIT_USAGE)
    if m < 5:
        return _fail(f"m={m} is unsupported; m must be at least 5", EXIT_USAGE)
    witnesses = {}
    for path in args.witness or ():
        try:
            w = load_witness(Path(path).read_text())
        except (OSError, ValueError) as exc:
            return _fail(f"cannot read witness {path}: {exc}", EXIT_USAGE)
        if w.m != m:
            return _fail(f"witness {path} is for m={w.m}, not m={m}", EXIT_USAGE)
        witnesses[w.side] = w
    try:
        d = construct(m, witnesses)
    except (OutOfScope, AssemblyError, ValueError) as exc:
        return _fail(str(exc), EXIT_USAGE)
    report = verify_decomposition(d)
    if not report.ok:
        for line in report.lines():
            print(line, file=sys.stderr)
        return _fail(f"m={m}: construction failed its self-check", EXIT_BUG)
    _write(args.output, serialize(d))
    print(f"m={m} classes={len(d.classes)} PASS", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        data = Path(args.path).read_bytes()
        d = parse(data, args.m)
    except OSError as exc:
        return _fail(f"cannot read {args.path}: {exc}", EXIT_USAGE)
    except ParseError as exc:
        return _fail(f"parse error: {exc}", EXIT_USAGE)
    report = verify_decomposition(d)
    report.subject = f"{args.path} m={d.m}"
    if args.json:
        print(json.dumps(report.to_dict(), indent=1))
    else:
        print("\n".join(report.lines()))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_search(args) -> int:
    try:
        spec = spec_for(args.m, args.side)
    except (OutOfScope, ValueError) as exc:
        return _fail(str(exc), EXIT_USAGE)
    try:
        budget = SearchBudget(nodes=args.budget_nodes, seconds=args.budget_seconds, seed=args.seed)
    except ValueError as exc:
        return _fail(str(exc), EXIT_USAGE)
    try:
        w = search_witness(spec, budget)
    except SearchExhausted as exc:
        print(f"m={args.m} side={spec.side} EXHAUSTED nodes={exc.nodes} candidates={exc.candidates}")
        return _fail(str(exc), EXIT_EXHAUSTED)
    _write(args.output, dump_witness(w).encode())
    q = f" q={w.q}" if w.q is not None else ""
    print(f"m={w.m} side={w.side} S={{{','.join(map(str, w.S))}}}{q} FOUND", file=sys.stderr)
    return EXIT_OK


def _show(m: int) -> list[str]:
    entry = dataset.load(m)
    out = [f"m={m} appendix={entry.appendix}"]
    if entry.decomposition is not None:
        for i, cls in enumerate(entry.decomposition.classes):
            out.append(f"R{i} = " + " ".join(str(c) for c in cls))
        return out
    for side, w in sorted(entry.witnesses.items()):
        marks = set(w.required)
        S = ",".join(("*" if d in marks else "") + str(d) for d in w.S)
        out.append(f"side={side} S={{{S}}}")
        if w.partition is not None:
            cells = [f"{{±{a},±{b}}}" for a, b in sorted(w.partition.quads)]
            cells += [f"{{{d}}}" for d in sorted(w.partition.singletons)]
            out.append(f"side={side} partition=" + " ".join(cells))
        for p in w.paths:
            out.append(f"side={side} path {p[0]}->{p[-1]} = " + " ".join(map(str, p)))
        for c in w.cycles:
            out.append(f"side={side} cycle = " + " ".join(map(str, c)))
    return out


def cmd_appendix(args) -> int:
    if args.action == "show":
        if args.m is None:
            return _fail("appendix show needs m", EXIT_USAGE)
        try:
            print("\n".join(_show(args.m)))
        except dataset.MissingEntry as exc:
            return _fail(str(exc.args[0]), EXIT_USAGE)
        return EXIT_OK
    report = dataset.verify_all()
    print("\n".join(report.lines()))
    return EXIT_OK if report.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dirober", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", help="build and self-check a decomposition")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-o", "--output", help="output path (default stdout)")
    p.add_argument("--witness", action="append", help="witness document to use instead of the stored one")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("verify", help="certify a decomposition document")
    p.add_argument("path")
    p.add_argument("-m", type=int, help="expected m")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="search for a witness")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("--side", choices=("X", "Y"))
    p.add_argument("--budget-seconds", type=int, default=600)
    p.add_argument("--budget-nodes", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("-o", "--output", help="output path (default stdout)")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("appendix", help="audit or print stored witnesses")
    p.add_argument("action", choices=("verify-all", "show"))
    p.add_argument("m", type=int, nargs="?")
    p.set_defaults(func=cmd_appendix)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
