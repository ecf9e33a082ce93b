import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nbising.embedding import (
    cycle_space_basis,
    dual_path,
    even_subgraph_gf,
    face_trace,
    is_even_subgraph,
    load_graph,
    mask_edges,
    subset_product,
    SignedCouplings,
)
from nbising.errors import (
    CapExceeded,
    EmbeddingError,
    NoPath,
    SchemaError,
    SurfaceError,
)
from nbising.fixtures import fixture_doc, fixture_graph


# ---------------------------------------------------------------------------
# loading and validation


def test_load_e1_smallest_valid_input():
    g = fixture_graph("e1")
    assert g.n_vertices == 2
    assert g.n_edges == 1
    assert g.surface.kind == "plane"


def test_c4_rotation_lists_two_edges_per_corner():
    g = fixture_graph("c4")
    for v in range(4):
        assert len(g.rotation[v]) == 2
        assert set(g.rotation[v]) == set(
            e.id for e in g.edges if v in (e.u, e.v))


def test_rotation_is_counterclockwise_by_angle():
    g = fixture_graph("grid3")
    for v in range(g.n_vertices):
        angles = [g.dart_angle(d) for d in g.out_darts(v)]
        assert angles == sorted(angles)


def test_wrap_on_plane_is_surface_error():
    doc = fixture_doc("e1")
    doc["edges"][0]["wrap"] = [1, 0]
    with pytest.raises(SurfaceError):
        load_graph(doc)


def test_self_loop_rejected():
    doc = fixture_doc("e1")
    doc["edges"][0]["v"] = 0
    with pytest.raises(EmbeddingError):
        load_graph(doc)


def test_duplicate_edge_rejected():
    doc = fixture_doc("c4")
    doc["edges"].append({"id": 4, "u": 1, "v": 0, "L": 0.2, "wrap": [0, 0]})
    with pytest.raises(EmbeddingError):
        load_graph(doc)


def test_crossing_segments_rejected():
    doc = {
        "surface": {"type": "plane"},
        "vertices": [
            {"id": 0, "x": 0.0, "y": 0.0},
            {"id": 1, "x": 1.0, "y": 1.0},
            {"id": 2, "x": 0.0, "y": 1.0},
            {"id": 3, "x": 1.0, "y": 0.0},
        ],
        "edges": [
            {"id": 0, "u": 0, "v": 1, "L": 0.1},
            {"id": 1, "u": 2, "v": 3, "L": 0.1},
        ],
    }
    with pytest.raises(EmbeddingError):
        load_graph(doc)


def test_malformed_documents():
    with pytest.raises(SchemaError):
        load_graph({"vertices": [], "edges": []})
    with pytest.raises(SchemaError):
        load_graph({"surface": {"type": "torus"}, "vertices": [], "edges": []})
    doc = fixture_doc("e1")
    doc["edges"][0].pop("L")
    with pytest.raises(SchemaError):
        load_graph(doc)


def test_torus_parallel_edges_are_distinct_curves():
    g = fixture_graph("t22")
    assert g.n_edges == 8
    for v in range(4):
        assert g.degree(v) == 4


# ---------------------------------------------------------------------------
# faces / dual


def test_face_counts(graphs):
    expected = {"e1": 1, "p3": 1, "c3": 2, "c4": 2, "bow": 3, "grid3": 5,
                "t22": 4, "t33": 9}
    for name, g in graphs.items():
        assert face_trace(g).n_faces == expected[name]


def test_c4_two_faces_jordan(duals):
    d = duals["c4"]
    assert d.n_faces == 2
    # every primal edge joins the two faces
    assert all(set(fe) == {0, 1} for fe in d.dual_edges)


def test_t22_euler(graphs, duals):
    g = graphs["t22"]
    assert g.n_vertices - g.n_edges + duals["t22"].n_faces == 0


def test_plane_outer_face_has_negative_area(duals):
    d = duals["c4"]
    areas = sorted(d.face_area)
    assert areas[0] == pytest.approx(-1.0)
    assert areas[1] == pytest.approx(1.0)


def test_inconsistent_wrap_fails_euler():
    doc = fixture_doc("t22")
    # corrupt one wrap: geometry stays straight but the surface data no
    # longer matches a cellular embedding
    doc["edges"][1]["wrap"] = [1, 1]
    with pytest.raises(EmbeddingError):
        g = load_graph(doc)
        face_trace(g)


# ---------------------------------------------------------------------------
# cycle space / even subgraphs


def test_cycle_space_ranks(graphs):
    expected = {"e1": 0, "p3": 0, "c3": 1, "c4": 1, "bow": 2, "grid3": 4,
                "t22": 5, "t33": 10}
    for name, g in graphs.items():
        assert len(cycle_space_basis(g)) == expected[name]


def test_basis_elements_are_even(graphs):
    for g in graphs.values():
        for mask in cycle_space_basis(g):
            assert is_even_subgraph(g, mask)


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=(1 << 4) - 1))
def test_cycle_space_combinations_even_grid3(bits):
    g = fixture_graph("grid3")
    basis = cycle_space_basis(g)
    mask = 0
    for i, b in enumerate(basis):
        if (bits >> i) & 1:
            mask ^= b
    assert is_even_subgraph(g, mask)


def test_even_gf_trivial_cases():
    k = 0.5
    assert even_subgraph_gf(fixture_graph("e1"), [k]) == 1.0
    g3 = fixture_graph("c3")
    assert even_subgraph_gf(g3, [k] * 3) == pytest.approx(1 + k**3, rel=1e-14)
    g4 = fixture_graph("c4")
    assert even_subgraph_gf(g4, [k] * 4) == pytest.approx(1 + k**4, rel=1e-14)


def brute_even_gf(g, K):
    total = 0.0
    for mask in range(1 << g.n_edges):
        if is_even_subgraph(g, mask):
            total += subset_product(K, mask)
    return total


def test_even_gf_matches_brute_force_all_fixtures(graphs):
    rng = random.Random(7)
    for name, g in graphs.items():
        if g.n_edges > 16:
            continue
        K = [rng.uniform(-0.9, 0.9) for _ in range(g.n_edges)]
        assert even_subgraph_gf(g, K) == pytest.approx(
            brute_even_gf(g, K), rel=1e-12, abs=1e-12), name


def test_even_gf_cap():
    with pytest.raises(CapExceeded):
        even_subgraph_gf(fixture_graph("t33"), [0.1] * 18, cap=10)


# ---------------------------------------------------------------------------
# dual paths and signed couplings


def test_c4_dual_path_single_edge(graphs, duals):
    res = dual_path(graphs["c4"], duals["c4"], 0, 1)
    assert len(res["edges"]) == 1
    assert bin(res["flipped"]).count("1") == 1


def test_dual_path_same_face_rejected(graphs, duals):
    with pytest.raises(NoPath):
        dual_path(graphs["c4"], duals["c4"], 0, 0)


def test_grid3_adjacent_faces_flip_shared_edge(graphs, duals):
    g, d = graphs["grid3"], duals["grid3"]
    # two faces sharing a primal edge
    eid, (fa, fb) = next(
        (e, fs) for e, fs in enumerate(d.dual_edges) if fs[0] != fs[1])
    res = dual_path(g, d, fa, fb)
    assert res["edges"] == [eid] or len(res["edges"]) == 1


def test_dual_path_deterministic(graphs, duals):
    g, d = graphs["grid3"], duals["grid3"]
    r1 = dual_path(g, d, 0, 3)
    r2 = dual_path(g, d, 0, 3)
    assert r1 == r2


def test_signed_couplings_flip_identity(graphs):
    g = fixture_graph("grid3")
    rng = random.Random(3)
    K = [rng.uniform(0.1, 0.9) for _ in range(g.n_edges)]
    flipped = 0b0011_0101_0110 & ((1 << g.n_edges) - 1)
    sc = SignedCouplings.from_base(K, flipped)
    for mask in range(0, 1 << g.n_edges, 257):
        if not is_even_subgraph(g, mask):
            continue
        lhs = subset_product(sc.values, mask)
        sign = -1 if bin(mask & flipped).count("1") % 2 else 1
        assert lhs == pytest.approx(sign * subset_product(K, mask), rel=1e-12)


def test_mask_edges_roundtrip():
    assert mask_edges(0b10110) == [1, 2, 4]
