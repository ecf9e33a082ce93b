"""Shipped fixture graphs and programmatic builders.

Fixtures: E1 (single edge), P3 (path on three vertices), C3, C4, BOW (two
triangles sharing a vertex), GRID3 (3x3 grid), T22 and T33 (2x2 and 3x3
torus lattices).  JSON copies live in the repository fixtures/ directory;
the builders here are the source of truth.
"""

from __future__ import annotations

from pathlib import Path

from .embedding import EmbeddedGraph, load_graph

DEFAULT_L = 0.2


def _doc(surface, vertices, edges):
    return {
        "surface": surface,
        "vertices": [{"id": i, "x": x, "y": y} for i, (x, y) in enumerate(vertices)],
        "edges": [
            {"id": i, "u": u, "v": v, "L": L, "wrap": list(wrap)}
            for i, (u, v, L, wrap) in enumerate(edges)
        ],
    }


def e1_doc(L: float = DEFAULT_L) -> dict:
    return _doc({"type": "plane"}, [(0.0, 0.0), (1.0, 0.0)],
                [(0, 1, L, (0, 0))])


def p3_doc(L: float = DEFAULT_L) -> dict:
    return _doc({"type": "plane"}, [(0.0, 0.0), (1.0, 0.0), (2.0, 0.0)],
                [(0, 1, L, (0, 0)), (1, 2, L, (0, 0))])


def c3_doc(L: float = DEFAULT_L) -> dict:
    return _doc({"type": "plane"}, [(0.0, 0.0), (1.0, 0.0), (0.5, 0.9)],
                [(0, 1, L, (0, 0)), (1, 2, L, (0, 0)), (2, 0, L, (0, 0))])


def c4_doc(L: float = DEFAULT_L) -> dict:
    return _doc({"type": "plane"},
                [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
                [(0, 1, L, (0, 0)), (1, 2, L, (0, 0)),
                 (2, 3, L, (0, 0)), (3, 0, L, (0, 0))])


def bow_doc(L: float = DEFAULT_L) -> dict:
    # vertex 0 is the shared centre of the two triangles
    verts = [(0.0, 0.0), (-1.0, 0.6), (-1.0, -0.6), (1.0, 0.6), (1.0, -0.6)]
    edges = [
        (0, 1, L, (0, 0)), (1, 2, L, (0, 0)), (2, 0, L, (0, 0)),
        (0, 3, L, (0, 0)), (3, 4, L, (0, 0)), (4, 0, L, (0, 0)),
    ]
    return _doc({"type": "plane"}, verts, edges)


def grid_doc(n: int = 3, L: float = DEFAULT_L) -> dict:
    verts = [(float(x), float(y)) for y in range(n) for x in range(n)]
    edges = []
    for y in range(n):
        for x in range(n):
            vid = x + n * y
            if x + 1 < n:
                edges.append((vid, vid + 1, L, (0, 0)))
            if y + 1 < n:
                edges.append((vid, vid + n, L, (0, 0)))
    return _doc({"type": "plane"}, verts, edges)


def torus_grid_doc(n: int, L: float = DEFAULT_L) -> dict:
    verts = [(float(x), float(y)) for y in range(n) for x in range(n)]
    edges = []
    for y in range(n):
        for x in range(n):
            vid = x + n * y
            rx = (x + 1) % n + n * y
            edges.append((vid, rx, L, ((x + 1) // n, 0)))
            uy = x + n * ((y + 1) % n)
            edges.append((vid, uy, L, (0, (y + 1) // n)))
    return _doc({"type": "torus", "period": [float(n), float(n)]}, verts, edges)


BUILDERS = {
    "e1": e1_doc,
    "p3": p3_doc,
    "c3": c3_doc,
    "c4": c4_doc,
    "bow": bow_doc,
    "grid3": lambda L=DEFAULT_L: grid_doc(3, L),
    "t22": lambda L=DEFAULT_L: torus_grid_doc(2, L),
    "t33": lambda L=DEFAULT_L: torus_grid_doc(3, L),
}


def fixture_doc(name: str, L: float = DEFAULT_L) -> dict:
    try:
        builder = BUILDERS[name.lower()]
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; have {sorted(BUILDERS)}") from None
    return builder(L)


def fixture_graph(name: str, L: float = DEFAULT_L) -> EmbeddedGraph:
    return load_graph(fixture_doc(name, L))


def fixtures_dir() -> Path:
    return Path(__file__).resolve().parents[2] / "fixtures"


def write_fixture_files(target: Path | None = None) -> list[Path]:
    """Regenerate the shipped fixture JSON files."""
    import json

    target = target or fixtures_dir()
    target.mkdir(parents=True, exist_ok=True)
    written = []
    for name in BUILDERS:
        path = target / f"{name}.json"
        path.write_text(json.dumps(fixture_doc(name), indent=2) + "\n")
        written.append(path)
    return written
