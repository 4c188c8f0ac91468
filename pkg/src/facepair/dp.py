"""Dynamic programme over a rooted binary tree decomposition.

Each bag holds the set of viable boundary configurations of the partial
triangulation built from the graph nodes introduced in its subtree.  A bag
is processed by (1) combining one configuration from each child, (2) adding
the tetrahedra introduced at the bag one at a time, gluing every arc whose
other end is already present, and (3) storing the survivors.  The graph is
admissible iff the root keeps a closed configuration the property accepts.

Two traversal strategies share that state space: ``exhaustive`` fills every
store bottom-up; ``dfs`` pushes each configuration upwards as soon as it is
found and stops at the first accepted root configuration.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .config import (
    Rejection,
    apply_identification,
    bound_boundary_configurations,
    disjoint_union,
    empty_configuration,
    standalone_config,
)
from .multigraph import MultiGraph, validate
from .properties import SimpleProperty
from .treedecomp import NiceDecomposition, validate_decomposition
from .triangulation import FaceRef, Gluing, Triangulation

STRATEGIES = ("exhaustive", "dfs")


@dataclass
class BagPlan:
    bag: int
    children: tuple[int, ...]
    # (node introduced, arc ids glued right after it), in processing order.
    steps: list[tuple[int, tuple[int, ...]]]


@dataclass
class DPPlan:
    nice: NiceDecomposition
    order: list[int]
    bags: dict[int, BagPlan]
    arc_bag: dict[int, int]

    @property
    def width(self):
        return self.nice.width()


def plan(g: MultiGraph, nd: NiceDecomposition) -> DPPlan:
    diag = validate_decomposition(g, nd.as_tree_decomposition())
    if not diag.valid:
        raise ValueError(f"decomposition does not fit the graph: {diag.message}")
    order = nd.postorder()
    rank = {}
    for b in order:
        for w in sorted(v for v, at in nd.introduce_at.items() if at == b):
            rank[w] = len(rank)
    bags = {}
    arc_bag = {}
    for b in order:
        steps = []
        for w in sorted((v for v, at in nd.introduce_at.items() if at == b), key=rank.get):
            links, loops = [], []
            for i, (u, v) in enumerate(g.arcs):
                if u == v == w:
                    loops.append(i)
                elif w in (u, v):
                    other = v if u == w else u
                    if rank[other] < rank[w]:
                        links.append(i)
            for i in links + loops:
                arc_bag[i] = b
            steps.append((w, tuple(links + loops)))
        bags[b] = BagPlan(b, nd.children[b], steps)
    if len(arc_bag) != g.arc_count:
        raise ValueError("some arc was not assigned to a bag")
    return DPPlan(nd, order, bags, arc_bag)


@dataclass
class SolveStats:
    strategy: str
    width: int
    max_configs: int = 0
    bags_processed: int = 0
    identifications: int = 0
    store_sizes: dict[int, int] = field(default_factory=dict)
    early_exit: bool = False
    elapsed_ms: float = 0.0

    def store_bound(self, prop):
        return bound_boundary_configurations(4 * (self.width + 1)) * prop.universe_size()


@dataclass
class SolveResult:
    admissible: bool
    stats: SolveStats


def _free_faces(config, tet):
    return [FaceRef(t, f) for t, f in config.boundary_faces if t == tet]


def _gluing_options(config, g, arc_id, w, symmetry_breaking):
    u, v = g.arcs[arc_id]
    if u == v:
        free = _free_faces(config, w)
        for a, b in itertools.combinations(free, 2):
            for p in itertools.permutations(b.vertices):
                yield Gluing(a, b, p)
        return
    other = v if u == w else u
    mine = _free_faces(config, w)
    theirs = _free_faces(config, other)
    if symmetry_breaking and len(mine) == 4:
        # First gluing onto an untouched tetrahedron: relabel it so the glued
        # face is 012 and the map is order-preserving.
        target = FaceRef(w, (0, 1, 2))
        for a in theirs:
            yield Gluing(a, target, (0, 1, 2))
        return
    for a in theirs:
        for b in mine:
            for p in itertools.permutations(b.vertices):
                yield Gluing(a, b, p)


def _check_inputs(g, prop, strategy):
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    if not isinstance(prop, SimpleProperty):
        raise TypeError("prop must be a SimpleProperty")
    if not validate(g).connected:
        raise ValueError("graph must be connected")


def _accepting(config, prop):
    return config.is_closed() and prop.accepts_closed(config.datum)


class _Run:
    def __init__(self, g, p: DPPlan, prop, symmetry_breaking, strategy):
        self.g = g
        self.p = p
        self.prop = prop
        self.sb = symmetry_breaking
        self.stats = SolveStats(strategy, p.width)

    def steps(self, bag):
        out = []
        for w, arcs in self.p.bags[bag].steps:
            out.append(("tet", w))
            out.extend(("arc", w, a) for a in arcs)
        return out

    def advance(self, config, step):
        """Configurations reachable from ``config`` by one planned step."""
        if step[0] == "tet":
            u = disjoint_union(config, standalone_config(step[1], self.prop), self.prop)
            if u is not None:
                yield u, None
            return
        _, w, arc = step
        for gl in _gluing_options(config, self.g, arc, w, self.sb):
            self.stats.identifications += 1
            r = apply_identification(config, gl, self.prop)
            if not isinstance(r, Rejection):
                yield r, gl

    # -- exhaustive --------------------------------------------------------

    def exhaustive(self, track=False):
        stores = {}
        for bag in self.p.order:
            bp = self.p.bags[bag]
            level = {empty_configuration(self.prop.initial()): ((), ())}
            for child in bp.children:
                nxt = {}
                for c, (origin, _) in level.items():
                    for d in stores[child]:
                        u = disjoint_union(c, d, self.prop)
                        if u is not None and u not in nxt:
                            nxt[u] = (origin + (d,), ())
                level = nxt
            for step in self.steps(bag):
                nxt = {}
                for c, (origin, gls) in level.items():
                    for r, gl in self.advance(c, step):
                        if r not in nxt:
                            nxt[r] = (origin, gls + (gl,) if track and gl else gls)
                level = nxt
            stores[bag] = level
            self.stats.bags_processed += 1
            self.stats.store_sizes[bag] = len(level)
            self.stats.max_configs = max(self.stats.max_configs, len(level))
            if not level:
                self.stats.early_exit = bag != self.p.nice.root
                return False, stores
            for child in bp.children:
                if not track:
                    stores[child] = None
        root = stores[self.p.nice.root]
        return any(_accepting(c, self.prop) for c in root), stores

    # -- depth-first ---------------------------------------------------------

    def dfs_bag(self, bag):
        bp = self.p.bags[bag]
        steps = self.steps(bag)
        visited = [set() for _ in range(len(steps) + 1)]
        found = set()
        self.stats.store_sizes[bag] = 0

        def combos():
            start = empty_configuration(self.prop.initial())
            kids = [self.dfs_bag(c) for c in bp.children]
            if not kids:
                yield start
            elif len(kids) == 1:
                for d in kids[0]:
                    u = disjoint_union(start, d, self.prop)
                    if u is not None:
                        yield u
            else:
                second = _Lazy(kids[1])
                for d1 in kids[0]:
                    first = disjoint_union(start, d1, self.prop)
                    if first is None:
                        continue
                    for d2 in second:
                        u = disjoint_union(first, d2, self.prop)
                        if u is not None:
                            yield u

        def extend(c, k):
            if c in visited[k]:
                return
            visited[k].add(c)
            if k == len(steps):
                found.add(c)
                self.stats.store_sizes[bag] = len(found)
                self.stats.max_configs = max(self.stats.max_configs, len(found))
                yield c
                return
            for r, _ in self.advance(c, steps[k]):
                yield from extend(r, k + 1)

        for c in combos():
            yield from extend(c, 0)
        self.stats.bags_processed += 1

    def dfs(self):
        for c in self.dfs_bag(self.p.nice.root):
            if _accepting(c, self.prop):
                self.stats.early_exit = True
                return True
        return False


class _Lazy:
    """Re-iterable view of an iterator that is consumed only on demand."""

    def __init__(self, it):
        self._it = iter(it)
        self._items = []
        self._done = False

    def __iter__(self):
        i = 0
        while True:
            if i < len(self._items):
                yield self._items[i]
                i += 1
            elif self._done:
                return
            else:
                try:
                    self._items.append(next(self._it))
                except StopIteration:
                    self._done = True


def solve(g: MultiGraph, nd: NiceDecomposition, prop: SimpleProperty,
          strategy="exhaustive", symmetry_breaking=True) -> SolveResult:
    _check_inputs(g, prop, strategy)
    t0 = time.perf_counter()
    run = _Run(g, plan(g, nd), prop, symmetry_breaking, strategy)
    if strategy == "dfs":
        ok = run.dfs()
    else:
        ok, _ = run.exhaustive()
    run.stats.elapsed_ms = (time.perf_counter() - t0) * 1000
    return SolveResult(ok, run.stats)


def solve_dfs(g, nd, prop, symmetry_breaking=True) -> SolveResult:
    return solve(g, nd, prop, "dfs", symmetry_breaking)


def witness(g: MultiGraph, nd: NiceDecomposition, prop: SimpleProperty,
            symmetry_breaking=True) -> Triangulation:
    """One closed triangulation with face pairing graph g and property prop."""
    _check_inputs(g, prop, "exhaustive")
    p = plan(g, nd)
    run = _Run(g, p, prop, symmetry_breaking, "exhaustive")
    ok, stores = run.exhaustive(track=True)
    if not ok:
        raise ValueError("graph is not admissible for this property; no witness exists")
    root = p.nice.root
    final = next(c for c in stores[root] if _accepting(c, prop))
    gluings = []
    todo = [(root, final)]
    while todo:
        bag, c = todo.pop()
        origin, gls = stores[bag][c]
        gluings.extend(gls)
        todo.extend(zip(p.bags[bag].children, origin))
    return Triangulation(g.node_count, gluings)
