"""Exact Ising partition functions and correlations via non-backtracking walks."""

from .embedding import (
    DualData,
    EmbeddedGraph,
    SignedCouplings,
    Surface,
    cycle_space_basis,
    dual_path,
    even_subgraph_gf,
    face_trace,
    load_graph,
    load_graph_file,
)
from .fixtures import fixture_doc, fixture_graph

__all__ = [
    "DualData",
    "EmbeddedGraph",
    "SignedCouplings",
    "Surface",
    "cycle_space_basis",
    "dual_path",
    "even_subgraph_gf",
    "face_trace",
    "fixture_doc",
    "fixture_graph",
    "load_graph",
    "load_graph_file",
]
