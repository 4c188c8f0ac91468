"""Boundary configurations: the state carried by the dynamic programme.

A configuration remembers only what happens on the boundary of a partial
triangulation:

* ``edges`` pairs up every (boundary face, face edge) reference with the one
  other reference it is identified with, plus an orientation bit (True when
  the two tetrahedron edges are identified with agreeing orientation);
* ``vertices`` partitions the tetrahedron vertices lying on boundary faces
  into vertex classes of the triangulation;
* ``datum`` is the extra value maintained by the active property.

References are plain tuples ``(tet, face, edge)`` with ``face`` a sorted
vertex triple and ``edge`` a sorted vertex pair inside it.  Corners of the
boundary are ``(tet, face, v)``; the boundary arcs of the vertex links are
exactly these corners.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from itertools import combinations
from typing import Hashable

from .triangulation import FACES, VERTICES, FaceRef, Gluing, Triangulation

REASONS = ("edge_reversal", "nonorientable_type_I", "type_II", "property_reject")


@dataclass(frozen=True)
class BoundaryConfiguration:
    edges: tuple = ()
    vertices: tuple = ()
    datum: Hashable = ()

    @classmethod
    def from_parts(cls, partner, classes, datum=()):
        """Build a canonical configuration from a partner map and vertex classes."""
        triples = []
        for r, (q, o) in partner.items():
            if r <= q:
                triples.append((r, q, o))
        triples.sort()
        vs = tuple(sorted(tuple(sorted(c)) for c in classes if c))
        return cls(tuple(triples), vs, datum)

    def partner_map(self):
        out = {}
        for r, q, o in self.edges:
            out[r] = (q, o)
            out[q] = (r, o)
        return out

    @property
    def boundary_faces(self):
        return sorted({(r[0], r[1]) for r, q, _ in self.edges} | {(q[0], q[1]) for r, q, _ in self.edges})

    @property
    def b(self):
        return len(self.boundary_faces)

    @property
    def tets(self):
        return ({r[0] for r, _, _ in self.edges} | {q[0] for _, q, _ in self.edges}
                | {t for cls in self.vertices for t, _ in cls})

    def is_closed(self):
        return not self.edges and not self.vertices

    def __str__(self):
        return format_configuration(self)


@dataclass(frozen=True)
class Rejection:
    reason: str


@dataclass(frozen=True)
class LinkTransition:
    """What one face identification did to the vertex links.

    ``types`` holds "I" or "III" for each of the three corner pairs glued;
    ``closed_vertices`` counts vertex classes that became internal.
    """

    types: tuple[str, ...]
    closed_vertices: int
    closed_edges: int


@dataclass(frozen=True)
class PunctureCycle:
    corners: tuple  # ((tet, face, v), ...) in traversal order
    entries: tuple  # vertex u such that the corner is entered at edge {v, u}
    vertex_class: int  # index into configuration.vertices

    def __len__(self):
        return len(self.corners)


def empty_configuration(datum=()):
    return BoundaryConfiguration((), (), datum)


def standalone_config(tet, prop=None):
    partner = {}
    for e in combinations(VERTICES, 2):
        f1, f2 = [f for f in FACES if set(e) <= set(f)]
        r1, r2 = (tet, f1, e), (tet, f2, e)
        partner[r1] = (r2, True)
        partner[r2] = (r1, True)
    datum = prop.initial() if prop is not None else ()
    return BoundaryConfiguration.from_parts(partner, [[(tet, v)] for v in VERTICES], datum)


def disjoint_union(c1, c2, prop=None):
    """Union of configurations of two disjoint triangulations, or None if the
    property refuses the combined datum."""
    shared = c1.tets & c2.tets
    if shared:
        raise ValueError(f"configurations share tetrahedra {sorted(shared)}")
    if prop is None:
        datum = ()
    else:
        datum = prop.combine(c1.datum, c2.datum)
        if datum is None:
            return None
    return BoundaryConfiguration(tuple(sorted(c1.edges + c2.edges)),
                                 tuple(sorted(c1.vertices + c2.vertices)), datum)


# -- link boundary --------------------------------------------------------
#
# An endpoint (corner, u) is the end of corner (t, f, v) lying on edge {v, u}.
# Endpoints pair up through the edge configuration; together with the pairing
# of the two endpoints of each corner they form the puncture cycles.

def _other(face, v, u):
    return next(x for x in face if x != v and x != u)


def _endpoint_matching(partner):
    match = {}
    for r, (q, o) in partner.items():
        t, f, (x, y) = r
        qt, qf, qe = q
        for pos, (v, u) in enumerate(((x, y), (y, x))):
            qpos = pos if o else 1 - pos
            qv, qu = qe[qpos], qe[1 - qpos]
            match[((t, f, v), u)] = ((qt, qf, qv), qu)
    return match


def _trace(match, corner, entry):
    """Walk one puncture cycle entering ``corner`` at edge {v, entry}."""
    corners, entries = [], []
    c, u = corner, entry
    while True:
        corners.append(c)
        entries.append(u)
        exit_end = (c, _other(c[1], c[2], u))
        c, u = match[exit_end]
        if c == corner:
            if u != entry:
                raise RuntimeError(f"puncture cycle through {corner} closes inconsistently")
            return corners, entries
        if len(corners) > len(match):
            raise RuntimeError("edge configuration does not close into cycles")


def puncture_cycles(c):
    """All puncture cycles of the vertex links, derived from the edge configuration."""
    match = _endpoint_matching(c.partner_map())
    class_of = {v: k for k, cls in enumerate(c.vertices) for v in cls}
    seen = set()
    cycles = []
    for t, f in c.boundary_faces:
        for v in f:
            start = (t, f, v)
            if start in seen:
                continue
            corners, entries = _trace(match, start, _other(f, v, v))
            seen.update(corners)
            cycles.append(PunctureCycle(tuple(corners), tuple(entries), class_of.get((t, v), -1)))
    return cycles


class _Classes:
    def __init__(self, classes):
        self.parent = {}
        for cls in classes:
            root = cls[0]
            for v in cls:
                self.parent[v] = root

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[ry] = rx


def _glue_corners(match, c1, c2, vmap):
    """Glue boundary arc c1 onto c2 in the endpoint matching (in place)."""
    ident = {}
    f1 = c1[1]
    for u in f1:
        if u == c1[2]:
            continue
        x, y = (c1, u), (c2, vmap[u])
        ident[x] = y
        ident[y] = x
    removed = set(ident)
    outside = [match[x] for x in removed if match[x] not in removed]
    for e in outside:
        x = match[e]
        while True:
            z = match[ident[x]]
            if z not in removed:
                break
            x = z
        match[e] = z
    for x in removed:
        del match[x]


def apply_identification(c, gluing: Gluing, prop=None):
    """Glue two boundary faces of the configuration.

    Returns the new configuration, or a ``Rejection`` naming why the result
    is not a partial 3-manifold triangulation (or fails the property).
    """
    fa = (gluing.a.tet, gluing.a.vertices)
    fb = (gluing.b.tet, gluing.b.vertices)
    partner = c.partner_map()
    for f in (fa, fb):
        if (f[0], f[1], f[1][:2]) not in partner:
            raise ValueError(f"face {FaceRef(*f)} is not on the boundary")
    vmap = gluing.vertex_map()

    # Edge step: splice the three pairs of edge chains.
    match = _endpoint_matching(partner)
    closed_edges = 0
    for x, y in combinations(fa[1], 2):
        px, py = vmap[x], vmap[y]
        ra = (fa[0], fa[1], (x, y))
        rb = (fb[0], fb[1], (min(px, py), max(px, py)))
        agree = px < py
        qa, oa = partner.pop(ra)
        if qa == rb:
            partner.pop(rb)
            # The chain closes up: consistent only if both routes agree.
            if oa != agree:
                return Rejection("edge_reversal")
            closed_edges += 1
            continue
        qb, ob = partner.pop(rb)
        o = (oa == agree) == ob
        partner[qa] = (qb, o)
        partner[qb] = (qa, o)

    # Link step: glue the three corner pairs one at a time.
    classes = _Classes(c.vertices)
    types = []
    for v in fa[1]:
        c1 = (fa[0], fa[1], v)
        c2 = (fb[0], fb[1], vmap[v])
        k1, k2 = classes.find((fa[0], v)), classes.find((fb[0], vmap[v]))
        if k1 != k2:
            types.append("III")
            classes.union(k1, k2)
        else:
            corners, entries = _trace(match, c1, _other(fa[1], v, v))
            try:
                i = corners.index(c2)
            except ValueError:
                return Rejection("type_II")
            exit2 = _other(c2[1], c2[2], entries[i])
            # The entry end of c1 must land on the exit end of c2.
            if vmap[entries[0]] != exit2:
                return Rejection("nonorientable_type_I")
            types.append("I")
        _glue_corners(match, c1, c2, vmap)

    # Vertex step: drop vertices that left the boundary.
    faces = set(c.boundary_faces) - {fa, fb}
    on_boundary = {(t, v) for t, f in faces for v in f}
    groups = {}
    for cls in c.vertices:
        for v in cls:
            groups.setdefault(classes.find(v), []).append(v)
    new_classes = []
    closed_vertices = 0
    for members in groups.values():
        kept = [v for v in members if v in on_boundary]
        if kept:
            new_classes.append(kept)
        else:
            closed_vertices += 1

    summary = LinkTransition(tuple(types), closed_vertices, closed_edges)
    datum = c.datum
    if prop is not None:
        datum = prop.on_identification(c, gluing, summary, c.datum)
        if datum is None:
            return Rejection("property_reject")
    out = BoundaryConfiguration.from_parts(partner, new_classes, datum)
    return out


def last_transition(c, gluing):
    """Recompute the LinkTransition of an identification (for inspection/tests)."""
    captured = []

    class _Spy:
        def on_identification(self, before, g, summary, datum):
            captured.append(summary)
            return datum

    result = apply_identification(c, gluing, _Spy())
    return result, (captured[0] if captured else None)


# -- direct extraction from a triangulation -----------------------------------

def extract_configuration(tri: Triangulation, datum=()):
    """Boundary configuration read off the full skeleton of a triangulation."""
    sk = tri.skeleton
    boundary = {(f.tet, f.vertices) for f in tri.boundary_faces()}
    partner = {}
    for cls in sk.edge_classes:
        refs = []
        for (t, e), sign in cls:
            for f in FACES:
                if set(e) <= set(f) and (t, f) in boundary:
                    refs.append(((t, f, e), sign))
        if not refs:
            continue
        if len(refs) != 2:
            raise ValueError(f"boundary edge class with {len(refs)} boundary references")
        (r1, s1), (r2, s2) = refs
        partner[r1] = (r2, s1 == s2)
        partner[r2] = (r1, s1 == s2)
    on_boundary = {(t, v) for t, f in boundary for v in f}
    classes = [[v for v in cls if v in on_boundary] for cls in sk.vertex_classes]
    return BoundaryConfiguration.from_parts(partner, classes, datum)


def replay(tet_count, gluings, prop=None):
    """Configuration of a triangulation built gluing by gluing, or the first Rejection."""
    c = empty_configuration(prop.initial() if prop is not None else ())
    for t in range(tet_count):
        c = disjoint_union(c, standalone_config(t, prop), prop)
        if c is None:
            return Rejection("property_reject")
    for g in gluings:
        c = apply_identification(c, g, prop)
        if isinstance(c, Rejection):
            return c
    return c


# -- counting -----------------------------------------------------------------

def count_edge_configurations(b):
    if b % 2 or b < 0:
        raise ValueError("b must be a non-negative even number")
    if 3 * b > 20:
        raise ValueError("exact count guarded to 3b <= 20")
    return math.factorial(3 * b) // math.factorial(3 * b // 2)


def bound_boundary_configurations(b):
    """Upper bound on boundary configurations with b boundary faces.

    Edge configurations times Berend's bound on the Bell number B_{3b}.
    """
    if b % 2 or b < 2:
        raise ValueError("b must be an even number >= 2")
    edge = math.factorial(3 * b) // math.factorial(3 * b // 2)
    return float(edge) * (2.376 * b / math.log(3 * b + 1)) ** (3 * b)


# -- text form ----------------------------------------------------------------

def _ref_str(r):
    t, f, e = r
    return f"(t{t}:{''.join(map(str, f))},{''.join(map(str, e))})"


def format_edges(c):
    return "\n".join(f"({_ref_str(r)},{_ref_str(q)},{'t' if o else 'f'})" for r, q, o in c.edges)


def format_vertices(c):
    return "\n".join("{" + ",".join(f"t{t}:{v}" for t, v in cls) + "}" for cls in c.vertices)


def format_configuration(c):
    parts = [format_edges(c), format_vertices(c)]
    return "\n".join(p for p in parts if p) + "\n"


_TRIPLE = re.compile(r"\(\(t(\d+):(\d{3}),(\d{2})\),\s*\(t(\d+):(\d{3}),(\d{2})\),\s*([tf])\)")
_CLASS = re.compile(r"\{([^{}]*)\}")
_VERTEX = re.compile(r"t(\d+):(\d)")


def parse_configuration(text, datum=()):
    """Read triples ``((t0:013,03),(t1:013,13),f)`` and classes ``{t0:2,t1:2}``.

    Tolerates any surrounding punctuation and ordering; the result is canonical.
    """
    partner = {}
    for m in _TRIPLE.finditer(text):
        r = (int(m[1]), tuple(map(int, m[2])), tuple(sorted(map(int, m[3]))))
        q = (int(m[4]), tuple(map(int, m[5])), tuple(sorted(map(int, m[6]))))
        o = m[7] == "t"
        partner[r] = (q, o)
        partner[q] = (r, o)
    stripped = _TRIPLE.sub("", text)
    classes = []
    for m in _CLASS.finditer(stripped):
        members = [(int(t), int(v)) for t, v in _VERTEX.findall(m[1])]
        if members:
            classes.append(members)
    return BoundaryConfiguration.from_parts(partner, classes, datum)
