"""Admissibility of 4-regular multigraphs as face pairing graphs of closed
3-manifold triangulations, by dynamic programming over tree decompositions."""

from .dp import SolveResult, solve, witness
from .multigraph import MultiGraph, canonical_label, enumerate_four_regular, parse_graph, validate
from .properties import exactly_one_vertex, max_internal_vertices, parse_property, trivial_property
from .treedecomp import exact_treewidth, heuristic_decomposition, make_nice

__all__ = [
    "MultiGraph", "SolveResult", "canonical_label", "enumerate_four_regular", "exact_treewidth",
    "exactly_one_vertex", "heuristic_decomposition", "make_nice", "max_internal_vertices",
    "parse_graph", "parse_property", "solve", "trivial_property", "validate", "witness",
]
