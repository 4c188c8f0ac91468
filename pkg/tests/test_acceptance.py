"""One test per acceptance criterion; the terminal summary prints PASS/FAIL lines."""

import random
from collections import Counter
from functools import lru_cache
from math import prod
from pathlib import Path

import pytest

from facepair import oracle
from facepair.cli import ResultRecord
from facepair.config import (Rejection, apply_identification, count_edge_configurations,
                             format_configuration, puncture_cycles, replay, standalone_config)
from facepair.dp import solve
from facepair.multigraph import canonical_label, enumerate_four_regular
from facepair.properties import exactly_one_vertex, trivial_property
from facepair.report import TIMING_NOTE, format_table, summarise
from facepair.treedecomp import TreeDecomposition, exact_treewidth, make_nice, single_bag
from facepair.triangulation import FACES, FaceRef, Triangulation, gluings_between, parse_triangulation

from helpers import brute_force_edge_configurations, gluing_sequences, random_partial

GOLDEN = Path(__file__).parent / "golden"
LINK_REASONS = {"edge_reversal", "nonorientable_type_I", "type_II"}


def _padded(td, v):
    """td with an extra root bag {v}, so v and its arcs are handled last."""
    new = max(td.bags) + 1
    host = next(b for b in sorted(td.bags) if v in td.bags[b])
    return TreeDecomposition({**td.bags, new: frozenset({v})}, set(td.tree_arcs) | {(new, host)}, new)


def _decompositions(g):
    exact = exact_treewidth(g)[1]
    return {"single": single_bag(g), "exact": exact, "padded": _padded(exact, g.node_count - 1)}


def _signature(nd):
    return (tuple(sorted((b, tuple(sorted(s))) for b, s in nd.bags.items())),
            tuple(sorted(nd.children.items())), nd.root)


@lru_cache(maxsize=None)
def _oracle_equivalence_runs():
    runs = []
    for n in (1, 2, 3):
        for g in enumerate_four_regular(n):
            nice = {name: make_nice(td, g) for name, td in _decompositions(g).items()}
            distinct = len({_signature(nd) for nd in nice.values()})
            for prop in (trivial_property(), exactly_one_vertex()):
                expected = oracle.admissible(g, prop)
                for name, nd in nice.items():
                    for strategy in ("exhaustive", "dfs"):
                        r = solve(g, nd, prop, strategy)
                        runs.append(dict(g=g, prop=prop, decomposition=name, strategy=strategy,
                                         distinct=distinct, expected=expected, result=r))
    return runs


@pytest.mark.acceptance("C1 dp.solve == oracle.admissible on all <=3-node graphs")
def test_c1_oracle_equivalence(note):
    runs = _oracle_equivalence_runs()
    graphs = {canonical_label(r["g"]) for r in runs}
    assert len(graphs) == 1 + 2 + 4
    assert all(r["distinct"] >= 2 for r in runs)
    assert {(r["strategy"]) for r in runs} == {"exhaustive", "dfs"}
    bad = [(canonical_label(r["g"]), str(r["prop"]), r["decomposition"], r["strategy"])
           for r in runs if r["result"].admissible != r["expected"]]
    assert not bad, bad
    positives = sum(r["expected"] for r in runs) // 6
    note(f"{len(runs)} runs over {len(graphs)} graphs; {positives} of {len(runs) // 6} (graph, property) pairs admissible")


@pytest.mark.acceptance("C2 census width histograms for 4, 5 and 6 nodes")
def test_c2_census(note):
    expected = {4: {1: 1, 2: 8, 3: 1}, 5: {1: 1, 2: 22, 3: 4, 4: 1}, 6: {1: 1, 2: 68, 3: 25, 4: 3}}
    for n, hist in expected.items():
        got = Counter(exact_treewidth(g)[0] for g in enumerate_four_regular(n))
        assert dict(got) == hist, (n, dict(got))
        note(f"n={n}: {dict(sorted(got.items()))}")


@pytest.mark.acceptance("C3 worked-example golden files (6/3 and 18/8)")
def test_c3_golden():
    for name, triples, classes in (("pinched_pyramid", 6, 3), ("cube", 18, 8)):
        tri = parse_triangulation((GOLDEN / f"{name}.tri").read_text())
        got = replay(tri.tet_count, tri.gluings)
        assert (len(got.edges), len(got.vertices)) == (triples, classes)
        assert format_configuration(got).encode() == (GOLDEN / f"{name}.expected.txt").read_bytes()
    pyramid = replay(2, parse_triangulation((GOLDEN / "pinched_pyramid.tri").read_text()).gluings)
    assert (((0, (0, 1, 3), (0, 3)), (1, (0, 1, 3), (1, 3)), False)) in pyramid.edges
    assert ((0, 2), (1, 2)) in pyramid.vertices


@pytest.mark.acceptance("C4 edge configuration counts: 120 at b=2, 665280 at b=4")
def test_c4_counting():
    assert brute_force_edge_configurations(2) == 120 == count_edge_configurations(2)
    double_factorial_11 = prod(range(11, 0, -2))
    assert count_edge_configurations(4) == 2 ** 6 * double_factorial_11 == 665280


@lru_cache(maxsize=None)
def _sequences(n):
    return list(gluing_sequences(n))


@pytest.mark.acceptance("C5 apply_identification == is_partial_3manifold on 1 and 2 tets")
def test_c5_fidelity(note):
    c = standalone_config(0)
    faces = [FaceRef(0, f) for f in FACES]
    singles = [g for i, a in enumerate(faces) for b in faces[i + 1:] for g in gluings_between(a, b)]
    assert len(singles) == 36
    for g in singles:
        res = apply_identification(c, g)
        assert (not isinstance(res, Rejection)) == Triangulation(1, [g]).is_partial_3manifold()
    for n in (1, 2):
        reasons = Counter()
        for gls, res in _sequences(n):
            ok = Triangulation(n, gls).is_partial_3manifold()
            assert (not isinstance(res, Rejection)) == ok, gls
            reasons[res.reason if isinstance(res, Rejection) else "accepted"] += 1
        assert set(reasons) - {"accepted"} <= LINK_REASONS
        note(f"{n} tet(s): {dict(sorted(reasons.items()))}")


@pytest.mark.acceptance("C6 puncture cycles == vertex link boundary cycles")
def test_c6_links(note):
    def check(tri, c):
        per_class = Counter(p.vertex_class for p in puncture_cycles(c))
        for k, cls in enumerate(c.vertices):
            assert per_class[k] == tri.vertex_link(cls[0]).boundary_cycle_count, (tri, cls)
        return len(c.vertices)

    classes = 0
    for n in (1, 2):
        for gls, res in _sequences(n):
            if not isinstance(res, Rejection):
                classes += check(Triangulation(n, gls), res)
    rng = random.Random(20261014)
    samples = 0
    for _ in range(300):
        tri = random_partial(rng, 3, rng.randint(1, 5))
        classes += check(tri, replay(3, tri.gluings))
        samples += 1
    note(f"{classes} vertex classes checked ({samples} sampled 3-tet triangulations)")


@pytest.mark.acceptance("C7 peak store size within the configuration bound")
def test_c7_store_bound(note):
    worst = None
    for r in _oracle_equivalence_runs():
        stats = r["result"].stats
        bound = stats.store_bound(r["prop"])
        assert stats.max_configs <= bound
        if worst is None or stats.max_configs > worst[0]:
            worst = (stats.max_configs, bound, stats.width, canonical_label(r["g"]), r["decomposition"])
    peak, bound, k, label, name = worst
    note(f"observed peak {peak} (graph {label}, {name} decomposition of width {k}); bound {bound:.3g}")


@pytest.mark.acceptance("C8 timing columns marked not reproducible")
def test_c8_timing_marked():
    runs = [r for r in _oracle_equivalence_runs() if r["strategy"] == "dfs" and r["decomposition"] == "exact"
            and str(r["prop"]) == "trivial"]
    records = [ResultRecord(canonical_label(r["g"]), r["g"].node_count, r["result"].stats.width,
                            r["result"].admissible, "trivial", "dfs", r["result"].stats.max_configs,
                            r["result"].stats.elapsed_ms) for r in runs]
    rows = summarise(records)
    assert rows and all(row["timing_reproducible"] is False for row in rows)
    table = format_table(rows)
    assert "avg ms*" in table and table.rstrip().endswith(TIMING_NOTE)
    assert "not reproducible" in (Path(__file__).parents[1] / "README.md").read_text()
