"""Command-line driver: ``diffclass classify``."""

from __future__ import annotations

import argparse
import sys

from . import corpus
from .bounds import SearchBounds
from .dsl import ParseError, parse_system
from .report import analyze, render_report


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="diffclass", description="Classify planar polynomial systems by operator order.")
    sub = ap.add_subparsers(dest="command", required=True)
    c = sub.add_parser("classify", help="classify one system and print the report")
    c.add_argument("file", nargs="?", help="system file ('-' for stdin)")
    c.add_argument("--input", dest="input", help="system file ('-' for stdin)")
    c.add_argument("--example", help=f"bundled example: {', '.join(corpus.names())}")
    c.add_argument("--max-degree", type=int, default=8, help="numerator degree bound (default 8)")
    c.add_argument("--max-n", type=int, default=4, help="bound on |n| for order 1 (default 4)")
    c.add_argument("--max-denom-power", type=int, default=4, help="denominator power bound (default 4)")
    c.add_argument("--darboux-degree", type=int, default=4, help="Darboux polynomial degree bound (default 4)")
    c.add_argument("--series-order", type=int, default=8, help="series truncation degree (default 8)")
    c.add_argument("--trials", type=int, default=20, help="random-point trials per identity (default 20)")
    c.add_argument("--seed", type=int, default=0, help="seed for random-point checks (default 0)")
    fmt = c.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="mode", action="store_const", const="json", help="JSON report (default)")
    fmt.add_argument("--human", dest="mode", action="store_const", const="human", help="human-readable report")
    c.set_defaults(mode="json")
    sub.add_parser("examples", help="list bundled examples")
    return ap


def _read_source(args) -> str:
    given = [s for s in (args.file, args.input, args.example) if s is not None]
    if len(given) != 1:
        raise ValueError("give exactly one of FILE, --input or --example")
    if args.example is not None:
        return corpus.read(args.example)
    path = args.file if args.file is not None else args.input
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "examples":
        for n in corpus.names():
            print(n)
        return 0
    try:
        src = _read_source(args)
        vf = parse_system(src)
        bounds = SearchBounds(
            num_deg=args.max_degree,
            n_range=args.max_n,
            max_denom_power=args.max_denom_power,
            darboux_deg=args.darboux_degree,
        )
        if args.series_order < 1 or args.trials < 1:
            raise ValueError("--series-order and --trials must be positive")
    except ParseError as exc:
        print(f"diffclass: parse error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as exc:
        print(f"diffclass: {exc}", file=sys.stderr)
        return 2
    doc = analyze(vf, bounds, series_order=args.series_order, trials=args.trials, seed=args.seed)
    sys.stdout.write(render_report(doc, args.mode))
    return 0


if __name__ == "__main__":
    sys.exit(main())
