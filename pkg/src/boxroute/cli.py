"""Command-line entry point: ``boxroute {gen,cover,route,bench}``.

Exit codes: 0 success, 1 usage error, 2 data error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .bench import DEFAULT_DEPTHS, boxcount_suite, timing_suite, write_csv
from .covering import cover, cover_to_json
from .graph import GraphError, gen_random_graph, gen_ternary_tree, parse_edge_list, write_edge_list
from .routing import bcr_route, build_supergraph, compute_stretch, dijkstra_route, route_to_json

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _depths(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="boxroute", description="Box-covering hierarchical routing on graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate a graph as an edge list")
    p.add_argument("--topology", choices=["ternary-tree", "er"], required=True)
    p.add_argument("--depth", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("cover", help="partition a graph into boxes")
    p.add_argument("--alg", choices=["gc", "memb", "ciea"], required=True)
    p.add_argument("--rb", type=int, required=True)
    p.add_argument("--gc-mode", choices=["strict", "song"], default="strict")
    p.add_argument("--seed", type=int, default=None, help="shuffle the GC coloring order")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output")

    p = sub.add_parser("route", help="route one s-t query")
    p.add_argument("--alg", choices=["dijkstra", "gc", "memb", "ciea"], required=True)
    p.add_argument("--rb", type=int, default=1)
    p.add_argument("--gc-mode", choices=["strict", "song"], default="strict")
    p.add_argument("-s", type=int, required=True, help="source id as written in the input file")
    p.add_argument("-t", type=int, required=True, help="target id as written in the input file")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output")

    p = sub.add_parser("bench", help="run the box-count or timing experiment")
    p.add_argument("suite", choices=["boxcount", "timing"])
    p.add_argument("--depths", type=_depths, default=list(DEFAULT_DEPTHS))
    p.add_argument("--rb", type=int, default=1)
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--build-reps", type=int, default=3)
    p.add_argument("--pairs", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--gc-mode", choices=["strict", "song"], default="strict")
    p.add_argument("-i", "--input", action="append", help="edge-list file to use instead of trees (repeatable)")
    p.add_argument("--out", required=True)
    return parser


def _load(path: str):
    with open(path, encoding="utf-8", newline="") as f:
        return parse_edge_list(f.read())


def _emit(text: str, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.write(text + "\n")
    else:
        Path(path).write_text(text + "\n", encoding="utf-8")


def _check_rb(rb: int) -> None:
    if rb < 1:
        raise UsageError("rb must be ≥ 1")


def _gen(args) -> None:
    if args.topology == "ternary-tree":
        if args.depth is None:
            raise UsageError("--topology ternary-tree requires --depth")
        if args.depth < 0:
            raise UsageError("depth must be ≥ 0")
        g = gen_ternary_tree(args.depth)
    else:
        if args.n is None or args.p is None:
            raise UsageError("--topology er requires --n and --p")
        if args.n < 0 or not 0 <= args.p <= 1:
            raise UsageError("need n ≥ 0 and 0 ≤ p ≤ 1")
        g = gen_random_graph(args.n, args.p, args.seed)
    header = f"# topology={args.topology} nodes={g.node_count} seed={args.seed}\n"
    Path(args.output).write_text(header + write_edge_list(g), encoding="utf-8")


def _cover(args) -> None:
    _check_rb(args.rb)
    g = _load(args.input)
    _emit(cover_to_json(cover(g, args.alg, args.rb, args.gc_mode, args.seed)), args.output)


def _route(args) -> None:
    if args.alg != "dijkstra":
        _check_rb(args.rb)
    g = _load(args.input)
    index = {label: i for i, label in enumerate(g.labels)}
    for flag, node in (("-s", args.s), ("-t", args.t)):
        if node not in index:
            raise GraphError(f"{flag} {node}: no such node in {args.input}")
    s, t = index[args.s], index[args.t]
    if args.alg == "dijkstra":
        route = dijkstra_route(g, s, t)
    else:
        sg = build_supergraph(g, cover(g, args.alg, args.rb, args.gc_mode))
        route = bcr_route(g, sg, s, t)
    _emit(route_to_json(compute_stretch(g, route), g.labels), args.output)


def _bench(args) -> None:
    _check_rb(args.rb)
    if args.reps < 1 or args.pairs < 1 or args.build_reps < 1:
        raise UsageError("reps, build-reps and pairs must be ≥ 1")
    graphs = [_load(p) for p in args.input] if args.input else None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if args.suite == "boxcount":
        records = boxcount_suite(args.depths, args.rb, args.gc_mode, args.seed, graphs=graphs)
    else:
        records = timing_suite(
            args.depths, args.rb, args.reps, args.pairs, args.seed, args.gc_mode, args.build_reps, graphs=graphs
        )
    with open(out / f"{args.suite}.csv", "w", encoding="utf-8", newline="") as f:
        write_csv(records, f)


COMMANDS = {"gen": _gen, "cover": _cover, "route": _route, "bench": _bench}


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args)
    except UsageError as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except (GraphError, OSError, json.JSONDecodeError) as e:
        print(f"boxroute: error: {e}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


def main() -> None:
    sys.exit(run_cli())
