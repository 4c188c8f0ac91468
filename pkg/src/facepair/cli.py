"""Batch front end.  Every command writes JSON lines to stdout.

Verdicts are data: the exit status is 0 on a clean run and 1 when some
input could not be read or failed validation.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from . import oracle
from .dp import STRATEGIES, solve
from .multigraph import (MAX_ENUM_NODES, GraphFormatError, canonical_label, enumerate_four_regular,
                         read_graph, serialize_graph, validate)
from .properties import parse_property
from .report import summarise
from .treedecomp import (DecompositionError, exact_treewidth, format_td, heuristic_decomposition,
                         make_nice, parse_td, validate_decomposition, width)

EXACT_LIMIT = 8


class InputError(Exception):
    pass


@dataclass
class ResultRecord:
    graph_id: str
    node_count: int
    treewidth_used: int
    admissible: bool
    property: str
    strategy: str
    max_configs: int
    elapsed_ms: float
    oracle_agrees: bool | None = None

    def to_json(self):
        d = asdict(self)
        if d["oracle_agrees"] is None:
            del d["oracle_agrees"]
        return json.dumps(d)


def _load_graph(path):
    try:
        g = read_graph(path)
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from None
    except (GraphFormatError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None
    diag = validate(g)
    if not diag.ok:
        problems = []
        if not diag.four_regular:
            problems.append(f"not 4-regular (bad degrees at {diag.bad_degrees})")
        if not diag.connected:
            problems.append("not connected")
        raise InputError(f"{path}: " + ", ".join(problems))
    return g


def _graph_id(path, g):
    if g.node_count <= EXACT_LIMIT:
        return canonical_label(g)
    return Path(path).name


def _decomposition(g, td_path=None):
    if td_path:
        try:
            td = parse_td(Path(td_path).read_text())
        except OSError as exc:
            raise InputError(f"{td_path}: cannot read ({exc.strerror})") from None
        except DecompositionError as exc:
            raise InputError(f"{td_path}: {exc}") from None
        diag = validate_decomposition(g, td)
        if not diag.valid:
            raise InputError(f"{td_path}: {diag.message}")
        return td
    if g.node_count <= EXACT_LIMIT:
        return exact_treewidth(g)[1]
    return heuristic_decomposition(g)


def check_one(path, td_path, prop_text, strategy, verify):
    g = _load_graph(path)
    td = _decomposition(g, td_path)
    prop = parse_property(prop_text)
    result = solve(g, make_nice(td, g), prop, strategy)
    rec = ResultRecord(_graph_id(path, g), g.node_count, width(td), result.admissible, str(prop),
                       strategy, result.stats.max_configs, round(result.stats.elapsed_ms, 3))
    if verify:
        if g.node_count > oracle.MAX_NODES:
            raise InputError(f"{path}: --verify-oracle needs <= {oracle.MAX_NODES} nodes")
        rec.oracle_agrees = oracle.admissible(g, prop) == result.admissible
    return rec


def _check_task(args):
    try:
        return check_one(*args), None
    except InputError as exc:
        return None, str(exc)


def cmd_check(args, out=None, err=None):
    out, err = out or sys.stdout, err or sys.stderr
    try:
        parse_property(args.property)
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return 1
    if args.td and len(args.graph) != 1:
        print("error: --td applies to exactly one --graph", file=err)
        return 1
    tasks = [(p, args.td, args.property, args.strategy, args.verify_oracle) for p in args.graph]
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            results = list(pool.map(_check_task, tasks))
    else:
        results = [_check_task(t) for t in tasks]
    status = 0
    records = []
    for rec, problem in results:
        if problem:
            print(f"error: {problem}", file=err)
            status = 1
            continue
        records.append(rec)
        print(rec.to_json(), file=out)
    if args.summary:
        for row in summarise(records):
            print(json.dumps(row), file=out)
    return status


def cmd_gen(args, out=None, err=None):
    out, err = out or sys.stdout, err or sys.stderr
    if not 1 <= args.nodes <= MAX_ENUM_NODES:
        print(f"error: --nodes must be in 1..{MAX_ENUM_NODES}", file=err)
        return 1
    graphs = enumerate_four_regular(args.nodes)
    target = Path(args.out) if args.out else None
    if target:
        target.mkdir(parents=True, exist_ok=True)
    hist = Counter()
    for i, g in enumerate(graphs):
        k = exact_treewidth(g)[0]
        hist[k] += 1
        name = f"n{args.nodes}_{i:03d}.txt"
        if target:
            (target / name).write_text(f"# {canonical_label(g)}\n" + serialize_graph(g))
        print(json.dumps({"file": name, "graph_id": canonical_label(g), "treewidth": k}), file=out)
    print(json.dumps({"summary": True, "node_count": args.nodes, "graphs": len(graphs),
                      "treewidth_histogram": {str(k): hist[k] for k in sorted(hist)}}), file=out)
    return 0


def cmd_oracle(args, out=None, err=None):
    out, err = out or sys.stdout, err or sys.stderr
    try:
        prop = parse_property(args.property)
    except ValueError as exc:
        print(f"error: {exc}", file=err)
        return 1
    status = 0
    for path in args.graph:
        try:
            g = _load_graph(path)
            if g.node_count > oracle.MAX_NODES and not args.allow_four:
                raise InputError(f"{path}: oracle is limited to {oracle.MAX_NODES} nodes "
                                 "(use --allow-four for 4)")
            if g.node_count > oracle.MAX_NODES_EXTENDED:
                raise InputError(f"{path}: oracle is limited to {oracle.MAX_NODES_EXTENDED} nodes")
        except InputError as exc:
            print(f"error: {exc}", file=err)
            status = 1
            continue
        t0 = time.perf_counter()
        n = oracle.count_closed(g, prop, allow_four=args.allow_four)
        rec = {"graph_id": _graph_id(path, g), "admissible": n > 0, "closed_count": n,
               "property": str(prop), "elapsed_ms": round((time.perf_counter() - t0) * 1000, 3)}
        print(json.dumps(rec), file=out)
    return status


def cmd_treewidth(args, out=None, err=None):
    out, err = out or sys.stdout, err or sys.stderr
    status = 0
    for path in args.graph:
        try:
            g = _load_graph(path)
            if args.exact and g.node_count > EXACT_LIMIT:
                raise InputError(f"{path}: exact treewidth is limited to {EXACT_LIMIT} nodes")
        except InputError as exc:
            print(f"error: {exc}", file=err)
            status = 1
            continue
        if args.exact:
            k, td = exact_treewidth(g)
        else:
            td = heuristic_decomposition(g)
            k = width(td)
        rec = {"graph_id": _graph_id(path, g), "node_count": g.node_count, "width": k,
               "method": "exact" if args.exact else "heuristic"}
        if args.out:
            dest = Path(args.out)
            if len(args.graph) > 1 or dest.is_dir():
                dest.mkdir(parents=True, exist_ok=True)
                dest = dest / (Path(path).stem + ".td")
            dest.write_text(format_td(td, g.node_count))
            rec["td_file"] = str(dest)
        print(json.dumps(rec), file=out)
    return status


def build_parser():
    ap = argparse.ArgumentParser(prog="facepair", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="decide admissibility with the dynamic programme")
    p.add_argument("--graph", nargs="+", required=True, metavar="FILE")
    p.add_argument("--td", metavar="FILE", help="PACE .td decomposition to use instead of computing one")
    p.add_argument("--property", default="trivial", help="trivial | one-vertex | max-internal=K")
    p.add_argument("--strategy", choices=STRATEGIES, default="exhaustive")
    p.add_argument("--verify-oracle", action="store_true", help="cross-check with brute force (<= 3 nodes)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes across graphs")
    p.add_argument("--summary", action="store_true", help="append aggregate rows by node count and width")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("gen", help="enumerate connected 4-regular multigraphs")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--out", metavar="DIR")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="count closed triangulations by brute force")
    p.add_argument("--graph", nargs="+", required=True, metavar="FILE")
    p.add_argument("--property", default="trivial")
    p.add_argument("--allow-four", action="store_true", help="lift the node guard to 4 (slow)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("treewidth", help="compute a tree decomposition")
    p.add_argument("--graph", nargs="+", required=True, metavar="FILE")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--heuristic", action="store_true")
    p.add_argument("--out", metavar="PATH", help=".td file, or a directory for several graphs")
    p.set_defaults(func=cmd_treewidth)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        print("error: --jobs must be positive", file=sys.stderr)
        return 1
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
