"""4-regular multigraphs: parsing, validation, canonical labels, enumeration.

Nodes are 0..n-1.  Arcs are unordered pairs with stable integer ids given by
their position; loops are written ``(u, u)`` and count 2 towards the degree.

Graph file format::

    # optional comment lines
    <node_count> <arc_count>
    u v
    ...
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from pathlib import Path

MAX_LABEL_NODES = 8
MAX_ENUM_NODES = 6


class GraphFormatError(ValueError):
    pass


@dataclass(frozen=True)
class MultiGraph:
    node_count: int
    arcs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.node_count < 1:
            raise ValueError("a graph needs at least one node")
        arcs = tuple((int(u), int(v)) for u, v in self.arcs)
        for u, v in arcs:
            if not (0 <= u < self.node_count and 0 <= v < self.node_count):
                raise ValueError(f"arc {{{u},{v}}} has a node outside 0..{self.node_count - 1}")
        object.__setattr__(self, "arcs", arcs)

    @property
    def arc_count(self):
        return len(self.arcs)

    def degree(self, v):
        return sum((u == v) + (w == v) for u, w in self.arcs)

    def degrees(self):
        deg = [0] * self.node_count
        for u, v in self.arcs:
            deg[u] += 1
            deg[v] += 1
        return deg

    def incident(self, v):
        """Ids of arcs touching v (a loop is listed once)."""
        return [i for i, (a, b) in enumerate(self.arcs) if v in (a, b)]

    def is_loop(self, arc_id):
        u, v = self.arcs[arc_id]
        return u == v

    def simple_edges(self):
        """Underlying simple graph: distinct non-loop node pairs, sorted."""
        return sorted({(min(u, v), max(u, v)) for u, v in self.arcs if u != v})

    def multiplicity_matrix(self):
        """m[i][j] = number of arcs {i,j}; the diagonal counts loops."""
        n = self.node_count
        m = [[0] * n for _ in range(n)]
        for u, v in self.arcs:
            if u == v:
                m[u][u] += 1
            else:
                m[u][v] += 1
                m[v][u] += 1
        return m

    def relabel(self, perm):
        """Graph with node i renamed perm[i]; arc ids are preserved."""
        return MultiGraph(self.node_count, tuple((perm[u], perm[v]) for u, v in self.arcs))

    @classmethod
    def from_matrix(cls, m):
        n = len(m)
        arcs = []
        for i in range(n):
            arcs.extend([(i, i)] * m[i][i])
            for j in range(i + 1, n):
                arcs.extend([(i, j)] * m[i][j])
        return cls(n, tuple(arcs))


def parse_graph(text: str) -> MultiGraph:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        lines.append((lineno, line))
    if not lines:
        raise GraphFormatError("empty graph file")

    def ints(lineno, line, count):
        parts = line.split()
        if len(parts) != count:
            raise GraphFormatError(f"line {lineno}: expected {count} integers, got {line!r}")
        try:
            return [int(p) for p in parts]
        except ValueError:
            raise GraphFormatError(f"line {lineno}: not an integer in {line!r}") from None

    n, m = ints(*lines[0], 2)
    if n < 1 or m < 0:
        raise GraphFormatError(f"line {lines[0][0]}: bad header {lines[0][1]!r}")
    arcs = []
    for lineno, line in lines[1:]:
        u, v = ints(lineno, line, 2)
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"line {lineno}: node index out of range 0..{n - 1}")
        arcs.append((u, v))
    if len(arcs) != m:
        raise GraphFormatError(f"header declares {m} arcs but {len(arcs)} were given")
    return MultiGraph(n, tuple(arcs))


def serialize_graph(g: MultiGraph) -> str:
    out = [f"{g.node_count} {g.arc_count}"]
    out.extend(f"{u} {v}" for u, v in g.arcs)
    return "\n".join(out) + "\n"


def read_graph(path) -> MultiGraph:
    return parse_graph(Path(path).read_text())


@dataclass(frozen=True)
class GraphDiagnostics:
    four_regular: bool
    connected: bool
    bad_degrees: tuple[tuple[int, int], ...] = ()

    @property
    def ok(self):
        return self.four_regular and self.connected


def is_connected(g: MultiGraph) -> bool:
    adj = [set() for _ in range(g.node_count)]
    for u, v in g.arcs:
        adj[u].add(v)
        adj[v].add(u)
    seen = {0}
    todo = deque([0])
    while todo:
        u = todo.popleft()
        for w in adj[u] - seen:
            seen.add(w)
            todo.append(w)
    return len(seen) == g.node_count


def validate(g: MultiGraph) -> GraphDiagnostics:
    bad = tuple((v, d) for v, d in enumerate(g.degrees()) if d != 4)
    return GraphDiagnostics(four_regular=not bad, connected=is_connected(g), bad_degrees=bad)


def _refined_cells(m):
    """Ordered partition of nodes by an isomorphism invariant."""
    n = len(m)
    inv = {}
    for v in range(n):
        nbr = tuple(sorted(m[v][u] for u in range(n) if u != v and m[v][u]))
        inv[v] = (m[v][v], nbr)
    # One round of neighbourhood refinement.
    inv2 = {v: (inv[v], tuple(sorted((m[v][u], inv[u]) for u in range(n) if u != v and m[v][u])))
            for v in range(n)}
    cells = {}
    for v in range(n):
        cells.setdefault(inv2[v], []).append(v)
    return [cells[k] for k in sorted(cells)]


def canonical_label(g: MultiGraph) -> str:
    """Isomorphism-invariant string: equal labels iff isomorphic multigraphs.

    Minimises the upper-triangle encoding of the multiplicity matrix over all
    node orderings consistent with an invariant-ordered partition.
    """
    n = g.node_count
    if n > MAX_LABEL_NODES:
        raise ValueError(f"canonical_label supports at most {MAX_LABEL_NODES} nodes, got {n}")
    m = g.multiplicity_matrix()
    cells = _refined_cells(m)
    best = None
    for parts in itertools.product(*(itertools.permutations(c) for c in cells)):
        order = [v for part in parts for v in part]
        code = tuple(m[order[i]][order[j]] for i in range(n) for j in range(i, n))
        if best is None or code < best:
            best = code
    return f"{n}:" + ".".join(map(str, best))


def enumerate_four_regular(n: int) -> list[MultiGraph]:
    """One representative per isomorphism class of connected 4-regular multigraphs."""
    if n < 1 or n > MAX_ENUM_NODES:
        raise ValueError(f"enumeration supports 1..{MAX_ENUM_NODES} nodes, got {n}")
    m = [[0] * n for _ in range(n)]
    remaining = [4] * n
    found = {}

    def place_loops(i):
        if i == n:
            fill(0, 1)
            return
        prev = m[i - 1][i - 1] if i else 2
        # Loop counts are non-increasing along the node order (relabelling freedom).
        for loops in range(min(prev, remaining[i] // 2), -1, -1):
            m[i][i] = loops
            remaining[i] -= 2 * loops
            place_loops(i + 1)
            remaining[i] += 2 * loops
        m[i][i] = 0

    def fill(i, j):
        if i == n - 1:
            if remaining[i] == 0:
                g = MultiGraph.from_matrix(m)
                if is_connected(g):
                    found.setdefault(canonical_label(g), g)
            return
        if j == n:
            if remaining[i] == 0:
                fill(i + 1, i + 2)
            return
        top = min(remaining[i], remaining[j])
        if j == n - 1:
            # Last slot in the row must absorb the rest of node i's degree.
            choices = [remaining[i]] if remaining[i] <= remaining[j] else []
        else:
            choices = range(top, -1, -1)
        for k in choices:
            m[i][j] = m[j][i] = k
            remaining[i] -= k
            remaining[j] -= k
            fill(i, j + 1)
            remaining[i] += k
            remaining[j] += k
        m[i][j] = m[j][i] = 0

    if n == 1:
        g = MultiGraph(1, ((0, 0), (0, 0)))
        return [g]
    place_loops(0)
    return [found[k] for k in sorted(found)]
