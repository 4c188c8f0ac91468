"""Cross-check the dynamic programme against brute force on small graphs.

Prints one line per (graph, property) with both verdicts, the oracle's count
of closed triangulations when --count is given, and a final mismatch tally.

    python3 scripts/dp_vs_oracle.py --nodes 1 2 --count
"""

import argparse
import time

from facepair import oracle
from facepair.dp import solve
from facepair.multigraph import canonical_label, enumerate_four_regular
from facepair.properties import parse_property
from facepair.treedecomp import exact_treewidth, heuristic_decomposition, make_nice, single_bag


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("--property", nargs="+", default=["trivial", "one-vertex"])
    ap.add_argument("--count", action="store_true", help="full oracle count (slow beyond 2 nodes)")
    args = ap.parse_args()
    mismatches = 0
    for n in args.nodes:
        for g in enumerate_four_regular(n):
            tds = {"single": single_bag(g), "exact": exact_treewidth(g)[1], "heuristic": heuristic_decomposition(g)}
            for text in args.property:
                prop = parse_property(text)
                t0 = time.perf_counter()
                expected = oracle.admissible(g, prop, allow_four=n == 4)
                extra = ""
                if args.count:
                    extra = f" closed={oracle.count_closed(g, prop, allow_four=n == 4)}"
                t_oracle = time.perf_counter() - t0
                verdicts = {}
                for name, td in tds.items():
                    for strategy in ("exhaustive", "dfs"):
                        verdicts[name, strategy] = solve(g, make_nice(td, g), prop, strategy).admissible
                bad = [k for k, v in verdicts.items() if v != expected]
                mismatches += len(bad)
                print(f"{canonical_label(g):24} {str(prop):14} oracle={expected!s:5}{extra} "
                      f"dp={'agree' if not bad else bad} ({t_oracle:.1f} s oracle)", flush=True)
    print(f"mismatches: {mismatches}")


if __name__ == "__main__":
    main()
