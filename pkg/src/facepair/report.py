"""Census-style summary tables (graph counts, run time, peak store size).

Graph counts and store sizes are exact and repeatable.  Run times depend on
the machine and interpreter, so every timing column is flagged as not
reproducible and is not meant to be compared against published figures.
"""

from __future__ import annotations

TIMING_NOTE = "* timing columns are machine-dependent and not reproducible; compare counts only"


def summarise(records):
    """Aggregate ResultRecords by (node_count, treewidth_used)."""
    groups = {}
    for r in records:
        groups.setdefault((r.node_count, r.treewidth_used), []).append(r)
    out = []
    for (n, k), rs in sorted(groups.items()):
        out.append({
            "summary": True, "node_count": n, "treewidth": k, "graphs": len(rs),
            "admissible": sum(r.admissible for r in rs),
            "avg_elapsed_ms": round(sum(r.elapsed_ms for r in rs) / len(rs), 3),
            "timing_reproducible": False,
            "max_configs": max(r.max_configs for r in rs),
        })
    return out


def format_table(rows):
    head = ("nodes", "tw", "graphs", "admissible", "avg ms*", "max configs")
    lines = ["  ".join(f"{h:>11}" for h in head)]
    for r in rows:
        cells = (r["node_count"], r["treewidth"], r["graphs"], r["admissible"],
                 f"{r['avg_elapsed_ms']:.1f}", r["max_configs"])
        lines.append("  ".join(f"{c:>11}" for c in cells))
    lines.append(TIMING_NOTE)
    return "\n".join(lines) + "\n"
