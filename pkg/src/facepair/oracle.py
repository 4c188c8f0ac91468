"""Brute-force ground truth: try every way of realising a graph's gluings.

Arcs are handled in id order; each arc picks a free face on each endpoint
and one of the six face maps.  Parallel arcs are interchangeable, so their
face choices are forced to increase, which makes each assignment appear once
(the one-node double-loop graph has 3 face pairings x 6^2 maps = 108).

With ``prune`` set, a branch is abandoned as soon as the partial
triangulation stops being a partial 3-manifold triangulation; removing
gluings preserves that property, so no closed completion is lost.
"""

from __future__ import annotations

import itertools
from typing import Iterator

from .multigraph import MultiGraph, validate
from .properties import SimpleProperty, TrivialProperty
from .triangulation import FACES, FaceRef, Gluing, Triangulation

MAX_NODES = 3
MAX_NODES_EXTENDED = 4


def _check(g, allow_four):
    limit = MAX_NODES_EXTENDED if allow_four else MAX_NODES
    if g.node_count > limit:
        raise ValueError(f"oracle is limited to {limit} nodes (got {g.node_count})")
    diag = validate(g)
    if not diag.ok:
        raise ValueError(f"oracle needs a connected 4-regular graph (four_regular={diag.four_regular}, "
                         f"connected={diag.connected})")


def enumerate_triangulations(g: MultiGraph, prune=True, allow_four=False) -> Iterator[Triangulation]:
    """Every complete gluing assignment on g, as a Triangulation."""
    _check(g, allow_four)
    arcs = list(g.arcs)
    # Previous arc with the same endpoints, for the increasing-face rule.
    prev_parallel = {}
    last = {}
    for i, (u, v) in enumerate(arcs):
        key = (min(u, v), max(u, v))
        if key in last:
            prev_parallel[i] = last[key]
        last[key] = i
    used = set()
    first_face = {}
    gluings = []

    def rec(i):
        if i == len(arcs):
            yield Triangulation(g.node_count, gluings)
            return
        u, v = arcs[i]
        lo, hi = min(u, v), max(u, v)
        floor = first_face.get(prev_parallel.get(i))
        for fa in FACES:
            a = FaceRef(lo, fa)
            if a in used or (floor is not None and a <= floor):
                continue
            for fb in FACES:
                b = FaceRef(hi, fb)
                if b in used or b == a or (lo == hi and b < a):
                    continue
                used.update((a, b))
                first_face[i] = a
                for p in itertools.permutations(fb):
                    gluings.append(Gluing(a, b, p))
                    if not prune or Triangulation(g.node_count, gluings).is_partial_3manifold():
                        yield from rec(i + 1)
                    gluings.pop()
                used.difference_update((a, b))
                del first_face[i]

    yield from rec(0)


def closed_triangulations(g, prop: SimpleProperty | None = None, prune=True, allow_four=False):
    prop = prop or TrivialProperty()
    for t in enumerate_triangulations(g, prune, allow_four):
        if t.is_closed_3manifold() and prop.holds_for(t):
            yield t


def admissible(g: MultiGraph, prop: SimpleProperty | None = None, prune=True, allow_four=False) -> bool:
    return next(closed_triangulations(g, prop, prune, allow_four), None) is not None


def count_closed(g: MultiGraph, prop: SimpleProperty | None = None, prune=True, allow_four=False) -> int:
    return sum(1 for _ in closed_triangulations(g, prop, prune, allow_four))
