"""Census-style table: graphs per treewidth, admissible counts, run time and
peak store size, for every connected 4-regular multigraph on n nodes.

    python3 scripts/census_table.py --nodes 4 5 --strategy dfs
"""

import argparse
import time

from facepair.cli import ResultRecord
from facepair.dp import STRATEGIES, solve
from facepair.multigraph import canonical_label, enumerate_four_regular
from facepair.properties import parse_property
from facepair.report import format_table, summarise
from facepair.treedecomp import exact_treewidth, make_nice


def run(n, prop, strategy):
    records = []
    for g in enumerate_four_regular(n):
        k, td = exact_treewidth(g)
        r = solve(g, make_nice(td, g), prop, strategy)
        records.append(ResultRecord(canonical_label(g), n, k, r.admissible, str(prop), strategy,
                                    r.stats.max_configs, r.stats.elapsed_ms))
    return records


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, nargs="+", default=[4, 5])
    ap.add_argument("--property", default="trivial")
    ap.add_argument("--strategy", choices=STRATEGIES, default="dfs")
    args = ap.parse_args()
    prop = parse_property(args.property)
    records = []
    t0 = time.perf_counter()
    for n in args.nodes:
        records.extend(run(n, prop, args.strategy))
    print(f"property={prop} strategy={args.strategy}")
    print(format_table(summarise(records)), end="")
    print(f"total {time.perf_counter() - t0:.1f} s")


if __name__ == "__main__":
    main()
