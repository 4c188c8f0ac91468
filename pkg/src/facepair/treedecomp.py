"""Tree decompositions: validation, exact and heuristic construction, and
conversion into rooted binary form for the dynamic programme.

Width is (largest bag size) - 1.  Loops and parallel arcs are ignored when
building decompositions; they never change the treewidth.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_fill_in

from .multigraph import MultiGraph

MAX_EXACT_NODES = 8


class DecompositionError(ValueError):
    pass


@dataclass
class TreeDecomposition:
    bags: dict[int, frozenset[int]]
    tree_arcs: set[tuple[int, int]] = field(default_factory=set)
    root: int | None = None

    def __post_init__(self):
        self.bags = {int(k): frozenset(v) for k, v in self.bags.items()}
        self.tree_arcs = {(min(a, b), max(a, b)) for a, b in self.tree_arcs}

    def adjacency(self):
        adj = {b: set() for b in self.bags}
        for a, b in self.tree_arcs:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def width(self):
        return width(self)


@dataclass(frozen=True)
class DecompositionDiagnostics:
    valid: bool
    condition: str | None = None
    witness: object = None
    message: str = ""


def _tree_problem(td: TreeDecomposition):
    if not td.bags:
        return "empty decomposition"
    for a, b in td.tree_arcs:
        if a not in td.bags or b not in td.bags:
            return f"tree arc ({a},{b}) names an unknown bag"
        if a == b:
            return f"tree arc ({a},{b}) is a self-loop"
    if len(td.tree_arcs) != len(td.bags) - 1:
        return f"{len(td.bags)} bags need {len(td.bags) - 1} tree arcs, found {len(td.tree_arcs)}"
    adj = td.adjacency()
    start = next(iter(td.bags))
    seen = {start}
    todo = [start]
    while todo:
        for c in adj[todo.pop()]:
            if c not in seen:
                seen.add(c)
                todo.append(c)
    if len(seen) != len(td.bags):
        return "bags do not form a connected tree"
    if td.root is not None and td.root not in td.bags:
        return f"root {td.root} is not a bag"
    return None


def validate_decomposition(g: MultiGraph, td: TreeDecomposition) -> DecompositionDiagnostics:
    problem = _tree_problem(td)
    if problem:
        return DecompositionDiagnostics(False, "tree", None, problem)
    covered = set().union(*td.bags.values())
    for v in range(g.node_count):
        if v not in covered:
            return DecompositionDiagnostics(False, "node_coverage", v, f"node {v} is in no bag")
    stray = covered - set(range(g.node_count))
    if stray:
        v = min(stray)
        return DecompositionDiagnostics(False, "node_coverage", v, f"bag mentions unknown node {v}")
    for i, (u, v) in enumerate(g.arcs):
        if not any(u in bag and v in bag for bag in td.bags.values()):
            return DecompositionDiagnostics(False, "arc_coverage", i,
                                            f"no bag contains both ends of arc {i} = {{{u},{v}}}")
    adj = td.adjacency()
    for v in range(g.node_count):
        holders = {b for b, bag in td.bags.items() if v in bag}
        start = next(iter(holders))
        seen = {start}
        todo = [start]
        while todo:
            for c in adj[todo.pop()]:
                if c in holders and c not in seen:
                    seen.add(c)
                    todo.append(c)
        if seen != holders:
            return DecompositionDiagnostics(False, "connectivity", v,
                                            f"bags containing node {v} are not connected")
    return DecompositionDiagnostics(True)


def width(td: TreeDecomposition) -> int:
    if not td.bags:
        raise DecompositionError("width of an empty decomposition")
    return max(len(b) for b in td.bags.values()) - 1


def single_bag(g: MultiGraph) -> TreeDecomposition:
    return TreeDecomposition({1: frozenset(range(g.node_count))}, set(), 1)


def _simple_adjacency(g: MultiGraph):
    adj = {v: set() for v in range(g.node_count)}
    for u, v in g.simple_edges():
        adj[u].add(v)
        adj[v].add(u)
    return adj


def decomposition_from_ordering(g: MultiGraph, order) -> TreeDecomposition:
    """Standard elimination-ordering construction.

    The bag of v is v plus its not-yet-eliminated neighbours in the filled
    graph; it hangs below the bag of the earliest-eliminated of those.
    """
    adj = {v: set(ns) for v, ns in _simple_adjacency(g).items()}
    pos = {v: i for i, v in enumerate(order)}
    if sorted(pos) != list(range(g.node_count)):
        raise DecompositionError("ordering must be a permutation of the graph nodes")
    bags = {}
    parent = {}
    for v in order:
        later = {u for u in adj[v] if pos[u] > pos[v]}
        bags[v] = frozenset(later | {v})
        for a in later:
            adj[a] |= later - {a}
        if later:
            parent[v] = min(later, key=pos.__getitem__)
    # Bag ids are 1-based; stitch components into one tree at the last bag.
    ids = {v: i + 1 for i, v in enumerate(order)}
    arcs = set()
    last = order[-1]
    for v in order:
        if v in parent:
            arcs.add((ids[v], ids[parent[v]]))
        elif v != last:
            arcs.add((ids[v], ids[last]))
    return TreeDecomposition({ids[v]: bags[v] for v in order}, arcs, ids[last])


def exact_treewidth(g: MultiGraph) -> tuple[int, TreeDecomposition]:
    """Minimum width over all elimination orderings, by subset DP."""
    n = g.node_count
    if n > MAX_EXACT_NODES:
        raise ValueError(f"exact_treewidth supports at most {MAX_EXACT_NODES} nodes, got {n}")
    adj = _simple_adjacency(g)
    full = (1 << n) - 1

    def q_size(eliminated, v):
        # Nodes outside eliminated+{v} reachable from v through eliminated nodes.
        seen = 1 << v
        stack = [v]
        count = 0
        while stack:
            x = stack.pop()
            for y in adj[x]:
                bit = 1 << y
                if seen & bit:
                    continue
                seen |= bit
                if eliminated & bit:
                    stack.append(y)
                else:
                    count += 1
        return count

    @lru_cache(maxsize=None)
    def best(s):
        # Width of the best ordering that eliminates exactly the nodes in s first.
        if s == 0:
            return -1, None
        out = None
        for v in range(n):
            if s >> v & 1:
                rest = s & ~(1 << v)
                w = max(best(rest)[0], q_size(rest, v))
                if out is None or w < out[0]:
                    out = (w, v)
        return out

    order = []
    s = full
    while s:
        v = best(s)[1]
        order.append(v)
        s &= ~(1 << v)
    order.reverse()
    tw = best(full)[0]
    td = decomposition_from_ordering(g, order)
    assert width(td) == tw
    return tw, td


def heuristic_decomposition(g: MultiGraph) -> TreeDecomposition:
    """Greedy min-fill decomposition (networkx); valid, not necessarily optimal."""
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.node_count))
    nxg.add_edges_from(g.simple_edges())
    _, tree = treewidth_min_fill_in(nxg)
    ids = {bag: i + 1 for i, bag in enumerate(tree.nodes)}
    bags = {ids[bag]: frozenset(bag) for bag in tree.nodes}
    arcs = {(ids[a], ids[b]) for a, b in tree.edges}
    # networkx returns a forest for disconnected inputs.
    comps = list(nx.connected_components(tree))
    anchor = ids[next(iter(comps[0]))]
    for comp in comps[1:]:
        arcs.add((anchor, ids[next(iter(comp))]))
    return TreeDecomposition(bags, arcs, anchor)


@dataclass
class NiceDecomposition:
    """Rooted decomposition where every bag has at most two children."""

    bags: dict[int, frozenset[int]]
    children: dict[int, tuple[int, ...]]
    root: int
    introduce_at: dict[int, int]

    def parent_map(self):
        return {c: b for b, cs in self.children.items() for c in cs}

    def postorder(self):
        out = []
        stack = [(self.root, False)]
        while stack:
            b, done = stack.pop()
            if done:
                out.append(b)
                continue
            stack.append((b, True))
            for c in reversed(self.children[b]):
                stack.append((c, False))
        return out

    def subtree(self, bag):
        out = []
        stack = [bag]
        while stack:
            b = stack.pop()
            out.append(b)
            stack.extend(self.children[b])
        return out

    def nodes_below(self, bag):
        """Graph nodes whose introduction bag lies in the subtree of ``bag``."""
        sub = set(self.subtree(bag))
        return {w for w, b in self.introduce_at.items() if b in sub}

    def width(self):
        return max(len(b) for b in self.bags.values()) - 1

    def as_tree_decomposition(self):
        arcs = {(b, c) for b, cs in self.children.items() for c in cs}
        return TreeDecomposition(dict(self.bags), arcs, self.root)


def make_nice(td: TreeDecomposition, g: MultiGraph | None = None) -> NiceDecomposition:
    problem = _tree_problem(td)
    if problem:
        raise DecompositionError(problem)
    if g is not None:
        diag = validate_decomposition(g, td)
        if not diag.valid:
            raise DecompositionError(diag.message)
    root = td.root if td.root is not None else min(td.bags)
    adj = td.adjacency()
    bags = dict(td.bags)
    children = {}
    next_id = max(bags) + 1
    todo = deque([root])
    seen = {root}
    while todo:
        b = todo.popleft()
        kids = sorted(c for c in adj[b] if c not in seen)
        seen.update(kids)
        todo.extend(kids)
        # More than two children: keep the first, push the rest onto a chain of copies.
        holder = b
        while len(kids) > 2:
            dup = next_id
            next_id += 1
            bags[dup] = bags[b]
            children[holder] = (kids[0], dup)
            holder = dup
            kids = kids[1:]
        children[holder] = tuple(kids)
    for b in bags:
        children.setdefault(b, ())

    introduce_at = {}
    todo = deque([root])
    while todo:
        b = todo.popleft()
        for w in sorted(bags[b]):
            introduce_at.setdefault(w, b)
        todo.extend(children[b])
    return NiceDecomposition(bags, children, root, introduce_at)


def parse_td(text: str) -> TreeDecomposition:
    """PACE 2017 ``.td`` format; graph nodes are 0-indexed to match graph files."""
    header = None
    bags = {}
    arcs = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        try:
            if parts[0] == "s":
                if parts[1] != "td" or len(parts) != 5:
                    raise DecompositionError(f"line {lineno}: bad header {line!r}")
                header = tuple(int(p) for p in parts[2:])
            elif parts[0] == "b":
                bags[int(parts[1])] = frozenset(int(p) for p in parts[2:])
            elif len(parts) == 2:
                arcs.add((int(parts[0]), int(parts[1])))
            else:
                raise DecompositionError(f"line {lineno}: cannot parse {line!r}")
        except ValueError as exc:
            if isinstance(exc, DecompositionError):
                raise
            raise DecompositionError(f"line {lineno}: non-integer field in {line!r}") from None
    if header is None:
        raise DecompositionError("missing 's td' header")
    num_bags, max_bag, _ = header
    if len(bags) != num_bags:
        raise DecompositionError(f"header declares {num_bags} bags, found {len(bags)}")
    if bags and max(len(b) for b in bags.values()) != max_bag:
        raise DecompositionError("header max bag size does not match the bags")
    root = 1 if 1 in bags else (min(bags) if bags else None)
    return TreeDecomposition(bags, arcs, root)


def format_td(td: TreeDecomposition, node_count: int) -> str:
    # Root first so that it becomes bag 1, which parse_td takes as the root.
    ids = sorted(td.bags)
    if td.root is not None:
        ids.remove(td.root)
        ids.insert(0, td.root)
    renum = {b: i + 1 for i, b in enumerate(ids)}
    lines = [f"s td {len(ids)} {width(td) + 1} {node_count}"]
    for b in ids:
        lines.append(" ".join(["b", str(renum[b])] + [str(v) for v in sorted(td.bags[b])]))
    for a, b in sorted(td.tree_arcs):
        lines.append(f"{renum[a]} {renum[b]}")
    return "\n".join(lines) + "\n"
