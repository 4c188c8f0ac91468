"""Union-find that also tracks a parity bit between each element and its root.

Used for edge identification in triangulations, where two tetrahedron edges
are identified either with matching or reversed orientation.
"""


class SignedUnionFind:
    """Disjoint sets over hashable items with a relative parity per element.

    ``parity(x, y) == 0`` means x and y are identified with agreeing
    orientation; 1 means reversed.  A union that contradicts the parities
    already implied is recorded in ``conflict`` rather than refused, so the
    structure stays consistent for later queries.
    """

    def __init__(self, items=()):
        self._parent = {}
        self._flip = {}
        self._rank = {}
        self.conflict = False
        for x in items:
            self.add(x)

    def add(self, x):
        if x not in self._parent:
            self._parent[x] = x
            self._flip[x] = 0
            self._rank[x] = 0

    def __contains__(self, x):
        return x in self._parent

    def find(self, x):
        """Return (root, parity of x relative to root)."""
        self.add(x)
        path = []
        while self._parent[x] != x:
            path.append(x)
            x = self._parent[x]
        root = x
        # Path compression: fold accumulated parity into each visited item.
        acc = 0
        for y in reversed(path):
            acc ^= self._flip[y]
            self._flip[y] = acc
            self._parent[y] = root
        return root, (self._flip[path[0]] if path else 0)

    def union(self, x, y, parity=0):
        """Identify x and y with the given relative parity.

        Returns False if x and y were already joined with the opposite parity.
        """
        rx, px = self.find(x)
        ry, py = self.find(y)
        if rx == ry:
            if px ^ py != parity:
                self.conflict = True
                return False
            return True
        if self._rank[rx] < self._rank[ry]:
            rx, ry = ry, rx
        self._parent[ry] = rx
        self._flip[ry] = px ^ py ^ parity
        if self._rank[rx] == self._rank[ry]:
            self._rank[rx] += 1
        return True

    def same(self, x, y):
        return self.find(x)[0] == self.find(y)[0]

    def parity(self, x, y):
        """Relative parity of x and y, or None if they are in different sets."""
        rx, px = self.find(x)
        ry, py = self.find(y)
        if rx != ry:
            return None
        return px ^ py

    def groups(self):
        """Classes as a dict root -> list of (item, parity-to-root)."""
        out = {}
        for x in list(self._parent):
            root, p = self.find(x)
            out.setdefault(root, []).append((x, p))
        return out
