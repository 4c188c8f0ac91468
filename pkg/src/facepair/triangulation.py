"""Full triangulations: face gluings, skeleton, vertex links, manifold tests.

This is the slow reference engine.  Everything is recomputed from the list
of gluings; nothing here relies on boundary configurations.

Notation follows ``t0:012 t1:132``: face 012 of tetrahedron 0 is glued to
face 123 of tetrahedron 1 with 0->1, 1->3, 2->2.  Every tetrahedron edge
carries the reference orientation from its smaller to its larger vertex.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property

from .multigraph import MultiGraph, is_connected
from .unionfind import SignedUnionFind

VERTICES = (0, 1, 2, 3)
# Tetrahedron edges in a fixed order; index k <-> EDGES[k].
EDGES = tuple(itertools.combinations(VERTICES, 2))
EDGE_INDEX = {e: k for k, e in enumerate(EDGES)}
FACES = tuple(itertools.combinations(VERTICES, 3))


class TriangulationError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class FaceRef:
    tet: int
    vertices: tuple[int, int, int]

    def __post_init__(self):
        vs = tuple(sorted(self.vertices))
        if len(set(vs)) != 3 or not set(vs) <= set(VERTICES):
            raise ValueError(f"bad face {self.vertices}")
        object.__setattr__(self, "vertices", vs)

    @property
    def opposite(self):
        return 6 - sum(self.vertices)

    def __str__(self):
        return f"t{self.tet}:" + "".join(map(str, self.vertices))


@dataclass(frozen=True)
class Gluing:
    """Identification of face ``a`` with face ``b``.

    ``images[k]`` is the vertex of ``b.tet`` that ``a.vertices[k]`` maps to.
    """

    a: FaceRef
    b: FaceRef
    images: tuple[int, int, int]

    def __post_init__(self):
        if sorted(self.images) != list(self.b.vertices):
            raise ValueError(f"images {self.images} are not a bijection onto face {self.b}")
        if self.a == self.b:
            raise ValueError(f"face {self.a} cannot be glued to itself")

    @classmethod
    def parse(cls, text):
        """Parse ``"t0:013 t1:132"`` (the first triple may be unsorted)."""
        m = re.fullmatch(r"\s*t(\d+):([0-3]{3})\s+(?:<->\s+)?t(\d+):([0-3]{3})\s*", text)
        if not m:
            raise ValueError(f"cannot parse gluing {text!r}")
        ta, fa, tb, fb = int(m[1]), m[2], int(m[3]), m[4]
        return cls.between(ta, tuple(map(int, fa)), tb, tuple(map(int, fb)))

    @classmethod
    def between(cls, ta, src, tb, dst):
        """Gluing with src[k] <-> dst[k] for k = 0, 1, 2."""
        pairs = sorted(zip(src, dst))
        return cls(FaceRef(ta, tuple(p[0] for p in pairs)), FaceRef(tb, tuple(p[1] for p in pairs)),
                   tuple(p[1] for p in pairs))

    def vertex_map(self):
        return dict(zip(self.a.vertices, self.images))

    def inverse(self):
        return Gluing.between(self.b.tet, self.images, self.a.tet, self.a.vertices)

    def __str__(self):
        return f"{self.a} t{self.b.tet}:" + "".join(map(str, self.images))


def gluings_between(a: FaceRef, b: FaceRef):
    """All six gluings of face a onto face b."""
    return [Gluing(a, b, p) for p in itertools.permutations(b.vertices)]


@dataclass(frozen=True)
class VertexLink:
    corners: tuple[tuple[int, int], ...]
    connected: bool
    orientable: bool
    euler_characteristic: int
    boundary_cycle_count: int

    def is_punctured_sphere(self, punctures=None):
        ok = (self.connected and self.orientable
              and self.euler_characteristic == 2 - self.boundary_cycle_count)
        return ok and (punctures is None or punctures == self.boundary_cycle_count)

    @property
    def is_sphere(self):
        return self.is_punctured_sphere(0)


class _Groups:
    """Plain union-find used for vertex, link-vertex and link-side classes."""

    def __init__(self, size):
        self.parent = list(range(size))

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


def _corner_forward(v, x, y):
    """True iff x -> y runs with the standard cycle of the corner triangle at v.

    The corner triangle at v has vertices sorted(VERTICES - {v}).
    """
    tri = [u for u in VERTICES if u != v]
    return (tri.index(y) - tri.index(x)) % 3 == 1


@dataclass(frozen=True)
class Skeleton:
    tet_count: int
    # edge_classes: list of lists of ((tet, (i, j)), sign); sign False == reversed
    # relative to the first member of the class.
    edge_classes: tuple
    vertex_classes: tuple[tuple[tuple[int, int], ...], ...]
    reversal_flag: bool

    def vertex_class_of(self, tet, v):
        for k, cls in enumerate(self.vertex_classes):
            if (tet, v) in cls:
                return k
        raise KeyError((tet, v))


class Triangulation:
    def __init__(self, tet_count, gluings=()):
        self.tet_count = tet_count
        self.gluings = tuple(gluings)
        used = {}
        for g in self.gluings:
            for f in (g.a, g.b):
                if not 0 <= f.tet < tet_count:
                    raise TriangulationError(f"face {f} names a missing tetrahedron")
                if f in used:
                    raise TriangulationError(f"face {f} is used by both {used[f]} and {g}")
                used[f] = g
        self._used = used

    def __repr__(self):
        return f"Triangulation({self.tet_count}, [{', '.join(map(str, self.gluings))}])"

    def __eq__(self, other):
        return (isinstance(other, Triangulation) and self.tet_count == other.tet_count
                and set(self.gluings) == set(other.gluings))

    def __hash__(self):
        return hash((self.tet_count, frozenset(self.gluings)))

    def boundary_faces(self):
        return [FaceRef(t, f) for t in range(self.tet_count) for f in FACES
                if FaceRef(t, f) not in self._used]

    def is_glued(self, face: FaceRef):
        return face in self._used

    def with_gluing(self, gluing):
        return Triangulation(self.tet_count, self.gluings + (gluing,))

    def without_gluing(self, index):
        return Triangulation(self.tet_count, self.gluings[:index] + self.gluings[index + 1:])

    def without_tetrahedron(self, tet):
        """Drop a tetrahedron and its gluings; later tetrahedra shift down by one."""
        def shift(f):
            return FaceRef(f.tet - (f.tet > tet), f.vertices)
        kept = [Gluing(shift(g.a), shift(g.b), g.images) for g in self.gluings
                if tet not in (g.a.tet, g.b.tet)]
        return Triangulation(self.tet_count - 1, kept)

    def face_pairing_graph(self) -> MultiGraph:
        return MultiGraph(self.tet_count, tuple((g.a.tet, g.b.tet) for g in self.gluings))

    @cached_property
    def skeleton(self) -> Skeleton:
        uf = SignedUnionFind((t, e) for t in range(self.tet_count) for e in EDGES)
        vg = _Groups(4 * self.tet_count)
        for g in self.gluings:
            p = g.vertex_map()
            for x, y in itertools.combinations(g.a.vertices, 2):
                px, py = p[x], p[y]
                uf.union((g.a.tet, (x, y)), (g.b.tet, (min(px, py), max(px, py))), int(px > py))
            for x in g.a.vertices:
                vg.union(4 * g.a.tet + x, 4 * g.b.tet + p[x])
        edge_classes = []
        for members in uf.groups().values():
            members.sort()
            base = members[0][1]
            edge_classes.append(tuple((m, p == base) for m, p in members))
        edge_classes.sort()
        vclasses = {}
        for i in range(4 * self.tet_count):
            vclasses.setdefault(vg.find(i), []).append((i // 4, i % 4))
        vertex_classes = tuple(sorted(tuple(c) for c in vclasses.values()))
        return Skeleton(self.tet_count, tuple(edge_classes), vertex_classes, uf.conflict)

    @cached_property
    def vertex_links(self) -> tuple[VertexLink, ...]:
        """One link per vertex class, in the order of ``skeleton.vertex_classes``."""
        n = self.tet_count
        # Link vertex (t, v, u): the end at v of tetrahedron edge {v, u}.
        lv = _Groups(16 * n)
        # Corner triangles (t, v) joined by glued sides.
        tri = _Groups(4 * n)
        glued_sides = [0] * (4 * n)
        orient_edges = {}
        for g in self.gluings:
            p = g.vertex_map()
            ta, tb = g.a.tet, g.b.tet
            for v in g.a.vertices:
                ca, cb = 4 * ta + v, 4 * tb + p[v]
                tri.union(ca, cb)
                glued_sides[ca] += 1
                glued_sides[cb] += 1
                u, w = [x for x in g.a.vertices if x != v]
                lv.union(16 * ta + 4 * v + u, 16 * tb + 4 * p[v] + p[u])
                lv.union(16 * ta + 4 * v + w, 16 * tb + 4 * p[v] + p[w])
                sa = _corner_forward(v, u, w)
                sb = _corner_forward(p[v], p[u], p[w])
                # Coherent orientations need the glued side traversed oppositely.
                flip = sa == sb
                orient_edges.setdefault(ca, []).append((cb, flip))
                orient_edges.setdefault(cb, []).append((ca, flip))

        links = []
        for cls in self.skeleton.vertex_classes:
            corners = [4 * t + v for t, v in cls]
            faces = len(corners)
            sides = 3 * faces - sum(glued_sides[c] for c in corners) // 2
            ends = {lv.find(16 * (c // 4) + 4 * (c % 4) + u) for c in corners
                    for u in VERTICES if u != c % 4}
            chi = len(ends) - sides + faces
            connected = len({tri.find(c) for c in corners}) == 1
            links.append(VertexLink(tuple(cls), connected, _orientable(corners, orient_edges),
                                    chi, self._boundary_cycles(cls, lv)))
        return tuple(links)

    def _boundary_cycles(self, cls, lv):
        # Unglued sides of the link; two are adjacent when they share a link vertex.
        sides = []
        for t, v in cls:
            for f in FACES:
                if v in f and not self.is_glued(FaceRef(t, f)):
                    u, w = [x for x in f if x != v]
                    sides.append((lv.find(16 * t + 4 * v + u), lv.find(16 * t + 4 * v + w)))
        if not sides:
            return 0
        ends = {}
        grp = _Groups(len(sides))
        for i, (x, y) in enumerate(sides):
            for end in (x, y):
                if end in ends:
                    grp.union(ends[end], i)
                else:
                    ends[end] = i
        return len({grp.find(i) for i in range(len(sides))})

    def vertex_link(self, vclass) -> VertexLink:
        """Link of a vertex class given by index or by any member (tet, v)."""
        if isinstance(vclass, int):
            return self.vertex_links[vclass]
        return self.vertex_links[self.skeleton.vertex_class_of(*vclass)]

    def is_connected(self):
        return is_connected(self.face_pairing_graph())

    def is_partial_3manifold(self):
        if self.skeleton.reversal_flag:
            return False
        return all(link.is_punctured_sphere() for link in self.vertex_links)

    def is_closed_3manifold(self):
        if self.skeleton.reversal_flag or not self.is_connected():
            return False
        return all(link.is_sphere for link in self.vertex_links)

    def vertex_count(self):
        return len(self.skeleton.vertex_classes)


def _orientable(corners, orient_edges):
    sign = {}
    for start in corners:
        if start in sign:
            continue
        sign[start] = 1
        stack = [start]
        while stack:
            c = stack.pop()
            for d, flip in orient_edges.get(c, ()):
                want = -sign[c] if flip else sign[c]
                if d not in sign:
                    sign[d] = want
                    stack.append(d)
                elif sign[d] != want:
                    return False
    return True


def build(tet_count, gluings) -> Triangulation:
    return Triangulation(tet_count, gluings)


def parse_triangulation(text: str) -> Triangulation:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise TriangulationError("empty triangulation file")
    try:
        n = int(lines[0])
    except ValueError:
        raise TriangulationError(f"first line must be the tetrahedron count, got {lines[0]!r}") from None
    return Triangulation(n, [Gluing.parse(ln) for ln in lines[1:]])


def format_triangulation(t: Triangulation) -> str:
    return "\n".join([str(t.tet_count)] + [str(g) for g in t.gluings]) + "\n"
