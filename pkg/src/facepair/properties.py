"""Simple properties: extra data carried through the dynamic programme.

A property supplies a finite datum per configuration and four hooks.  Hooks
return the new datum, or None to reject.  Every hook sees configuration-level
data only, never the tetrahedron count.

``holds_for`` evaluates the same property on a full closed triangulation and
is used only by the brute-force oracle.
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class SimpleProperty:
    name = "abstract"

    def universe_size(self) -> int:
        raise NotImplementedError

    def initial(self):
        raise NotImplementedError

    def combine(self, a, b):
        raise NotImplementedError

    def on_identification(self, before, gluing, transition, datum):
        raise NotImplementedError

    def accepts_closed(self, datum) -> bool:
        raise NotImplementedError

    def holds_for(self, tri) -> bool:
        raise NotImplementedError

    def __str__(self):
        return self.name


class TrivialProperty(SimpleProperty):
    name = "trivial"

    def universe_size(self):
        return 1

    def initial(self):
        return ()

    def combine(self, a, b):
        return ()

    def on_identification(self, before, gluing, transition, datum):
        return datum

    def accepts_closed(self, datum):
        return True

    def holds_for(self, tri):
        return True


@dataclass(frozen=True)
class MaxInternalVertices(SimpleProperty):
    """At most ``limit`` internal vertices.

    The datum counts internal vertices so far; exceeding the limit is the
    ``too_many`` state, which can never recover and is rejected on the spot.
    """

    limit: int

    def __post_init__(self):
        if self.limit < 0:
            raise ValueError("limit must be non-negative")

    @property
    def name(self):
        return f"max-internal={self.limit}"

    def universe_size(self):
        return self.limit + 2

    def initial(self):
        return 0

    def combine(self, a, b):
        total = a + b
        return total if total <= self.limit else None

    def on_identification(self, before, gluing, transition, datum):
        total = datum + transition.closed_vertices
        return total if total <= self.limit else None

    def accepts_closed(self, datum):
        return datum is not None and datum <= self.limit

    def holds_for(self, tri):
        return tri.vertex_count() <= self.limit


@dataclass(frozen=True)
class ExactlyOneVertex(MaxInternalVertices):
    limit: int = 1

    @property
    def name(self):
        return "one-vertex"

    def accepts_closed(self, datum):
        return datum == 1

    def holds_for(self, tri):
        return tri.vertex_count() == 1


def trivial_property():
    return TrivialProperty()


def max_internal_vertices(x):
    return MaxInternalVertices(x)


def exactly_one_vertex():
    return ExactlyOneVertex()


def parse_property(text: str) -> SimpleProperty:
    text = text.strip()
    if text == "trivial":
        return trivial_property()
    if text == "one-vertex":
        return exactly_one_vertex()
    m = re.fullmatch(r"max-internal=(\d+)", text)
    if m:
        return max_internal_vertices(int(m[1]))
    raise ValueError(f"unknown property {text!r}; use trivial, one-vertex or max-internal=K")
