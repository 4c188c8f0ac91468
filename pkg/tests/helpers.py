"""Shared generators for the test suite."""

import itertools
import random

from facepair.config import BoundaryConfiguration, Rejection, apply_identification, replay
from facepair.triangulation import FACES, FaceRef, Triangulation, gluings_between


def all_faces(n):
    return [FaceRef(t, f) for t in range(n) for f in FACES]


def gluing_sequences(n):
    """Every set of gluings on n tetrahedra, built in increasing order of first face.

    Yields (gluings, outcome) where outcome is the configuration or the
    Rejection from the last step; rejected sequences are not extended
    (removing gluings preserves partiality, so nothing is lost).
    """
    faces = all_faces(n)

    def rec(cfg, gls, used, floor):
        free = [f for f in faces if f not in used]
        for i, a in enumerate(free):
            if floor is not None and a <= floor:
                continue
            for b in free[i + 1:]:
                for g in gluings_between(a, b):
                    res = apply_identification(cfg, g)
                    seq = gls + [g]
                    yield seq, res
                    if not isinstance(res, Rejection):
                        yield from rec(res, seq, used | {a, b}, a)

    yield from rec(replay(n, []), [], frozenset(), None)


def random_gluings(rng: random.Random, n, k):
    """Up to k random gluings on n tetrahedra (faces never reused)."""
    free = all_faces(n)
    out = []
    for _ in range(k):
        if len(free) < 2:
            break
        a, b = rng.sample(free, 2)
        free.remove(a)
        free.remove(b)
        out.append(rng.choice(gluings_between(min(a, b), max(a, b))))
    return out


def random_partial(rng: random.Random, n, k, tries=50):
    """A random partial 3-manifold triangulation with at most k gluings."""
    gls = []
    faces = all_faces(n)
    for _ in range(k):
        for _ in range(tries):
            free = [f for f in faces if not any(f in (g.a, g.b) for g in gls)]
            if len(free) < 2:
                return Triangulation(n, gls)
            a, b = sorted(rng.sample(free, 2))
            g = rng.choice(gluings_between(a, b))
            if Triangulation(n, gls + [g]).is_partial_3manifold():
                gls.append(g)
                break
    return Triangulation(n, gls)


def _matchings(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for i, other in enumerate(rest):
        for m in _matchings(rest[:i] + rest[i + 1:]):
            yield [(first, other)] + m


def brute_force_edge_configurations(b):
    """Distinct edge configurations on b faces: every perfect matching of the
    3b edge references, with every choice of orientation bits."""
    faces = list(itertools.combinations(range(4), 3))[:b] if b <= 4 else None
    if faces is None:
        raise ValueError("brute force only for b <= 4")
    refs = [(0, f, e) for f in faces for e in itertools.combinations(f, 2)]
    seen = set()
    for m in _matchings(refs):
        for bits in itertools.product((True, False), repeat=len(m)):
            partner = {}
            for (r, q), o in zip(m, bits):
                partner[r] = (q, o)
                partner[q] = (r, o)
            seen.add(BoundaryConfiguration.from_parts(partner, []))
    return len(seen)
