import pytest
from collections import Counter
from hypothesis import given, settings, strategies as st

from facepair.multigraph import MultiGraph, enumerate_four_regular
from facepair.treedecomp import (DecompositionError, TreeDecomposition, decomposition_from_ordering,
                                 exact_treewidth, format_td, heuristic_decomposition, make_nice,
                                 parse_td, single_bag, validate_decomposition, width)

K5 = MultiGraph(5, tuple((i, j) for i in range(5) for j in range(i + 1, 5)))


def test_single_bag_is_valid():
    d = validate_decomposition(K5, single_bag(K5))
    assert d.valid and width(single_bag(K5)) == 4


def test_missing_node_is_reported():
    td = TreeDecomposition({1: frozenset({0, 1, 2, 3})}, set())
    d = validate_decomposition(K5, td)
    assert not d.valid and d.condition == "node_coverage" and d.witness == 4


def test_arc_coverage_and_connectivity():
    g = MultiGraph(3, ((0, 1), (0, 1), (0, 2), (0, 2), (1, 2), (1, 2)))
    td = TreeDecomposition({1: frozenset({0, 1}), 2: frozenset({1, 2})}, {(1, 2)})
    assert validate_decomposition(g, td).condition == "arc_coverage"
    td = TreeDecomposition({1: frozenset({0, 1, 2}), 2: frozenset({1}), 3: frozenset({0, 2})},
                           {(1, 2), (2, 3)})
    assert validate_decomposition(g, td).condition == "connectivity"


def test_cycle_in_tree_is_reported():
    td = TreeDecomposition({1: frozenset({0}), 2: frozenset({0}), 3: frozenset({0})},
                           {(1, 2), (2, 3), (1, 3)})
    assert validate_decomposition(MultiGraph(1, ((0, 0), (0, 0))), td).condition == "tree"


def test_exact_k5():
    k, td = exact_treewidth(K5)
    assert k == 4 and validate_decomposition(K5, td).valid


@pytest.mark.parametrize("n,hist", [(4, {1: 1, 2: 8, 3: 1}), (5, {1: 1, 2: 22, 3: 4, 4: 1})])
def test_width_histograms(n, hist):
    assert Counter(exact_treewidth(g)[0] for g in enumerate_four_regular(n)) == hist


@pytest.mark.parametrize("n", [3, 4, 5])
def test_heuristic_valid_and_not_better_than_exact(n):
    for g in enumerate_four_regular(n):
        td = heuristic_decomposition(g)
        assert validate_decomposition(g, td).valid
        assert width(td) >= exact_treewidth(g)[0]


def test_width_of_empty_raises():
    with pytest.raises(DecompositionError):
        width(TreeDecomposition({}, set()))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_nice_is_binary_and_equivalent(data):
    n = data.draw(st.integers(2, 5))
    g = data.draw(st.sampled_from(enumerate_four_regular(n)))
    order = data.draw(st.permutations(range(n)))
    td = decomposition_from_ordering(g, order)
    nd = make_nice(td, g)
    assert all(len(c) <= 2 for c in nd.children.values())
    assert nd.width() == width(td)
    assert validate_decomposition(g, nd.as_tree_decomposition()).valid
    # Every node is introduced exactly once, at a bag containing it.
    assert set(nd.introduce_at) == set(range(n))
    assert all(v in nd.bags[b] for v, b in nd.introduce_at.items())


def test_make_nice_splits_wide_join():
    star = TreeDecomposition({1: frozenset({0}), 2: frozenset({0}), 3: frozenset({0}), 4: frozenset({0})},
                             {(1, 2), (1, 3), (1, 4)}, root=1)
    nd = make_nice(star)
    assert max(len(c) for c in nd.children.values()) == 2
    assert len(nd.bags) == 5


def test_pace_round_trip():
    g = enumerate_four_regular(5)[3]
    td = heuristic_decomposition(g)
    back = parse_td(format_td(td, g.node_count))
    assert validate_decomposition(g, back).valid
    assert width(back) == width(td)
    assert sorted(map(sorted, back.bags.values())) == sorted(map(sorted, td.bags.values()))


@pytest.mark.parametrize("text", ["b 1 0\n", "s td 2 1 1\nb 1 0\n", "s td 1 2 1\nb 1 0\n", "s td 1 1 1\nb x\n"])
def test_pace_errors(text):
    with pytest.raises(DecompositionError):
        parse_td(text)
