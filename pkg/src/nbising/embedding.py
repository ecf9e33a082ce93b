"""Embedded-graph data model.

Graphs are straight-line embedded in the plane or in a flat torus.  On the
torus an edge is a straight segment in the universal cover: the endpoint v of
an edge (u, v) with wrap (wx, wy) sits at position(v) + (wx*Px, wy*Py) when
the segment is developed starting from u.  The counterclockwise rotation
system at each vertex is derived from these outgoing segment directions, so
cyclic order and turning angles come from a single source of truth.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

from .errors import (
    CapExceeded,
    EmbeddingError,
    NoPath,
    SchemaError,
    SurfaceError,
)

EPS = 1e-9

Vec = tuple[float, float]


# ---------------------------------------------------------------------------
# low-level 2d helpers


def _sub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1])


def _cross(a: Vec, b: Vec) -> float:
    return a[0] * b[1] - a[1] * b[0]


def _dot(a: Vec, b: Vec) -> float:
    return a[0] * b[0] + a[1] * b[1]


def _norm(a: Vec) -> float:
    return math.hypot(a[0], a[1])


def segments_conflict(p1: Vec, p2: Vec, q1: Vec, q2: Vec, eps: float = EPS) -> bool:
    """True if two segments intersect anywhere except at shared endpoints.

    Coincident (overlapping collinear) segments count as a conflict; a shared
    endpoint does not, provided the segments only touch there.
    """
    d1 = _sub(p2, p1)
    d2 = _sub(q2, q1)
    denom = _cross(d1, d2)
    r = _sub(q1, p1)
    len1 = _norm(d1)
    len2 = _norm(d2)
    if len1 < eps or len2 < eps:
        raise EmbeddingError("degenerate (zero-length) segment")
    if abs(denom) < eps * len1 * len2:
        # Parallel.  Conflict only if collinear and overlapping beyond a point.
        if abs(_cross(d1, r)) > eps * len1 * max(len2, _norm(r), 1.0):
            return False
        t0 = _dot(r, d1) / (len1 * len1)
        t1 = t0 + _dot(d2, d1) / (len1 * len1)
        lo, hi = min(t0, t1), max(t0, t1)
        tol = eps / len1
        overlap = min(hi, 1.0) - max(lo, 0.0)
        return overlap > tol
    t = _cross(r, d2) / denom
    u = _cross(r, d1) / denom
    tol1 = eps / len1
    tol2 = eps / len2
    if t < -tol1 or t > 1 + tol1 or u < -tol2 or u > 1 + tol2:
        return False
    t_end = t < tol1 or t > 1 - tol1
    u_end = u < tol2 or u > 1 - tol2
    if t_end and u_end:
        return False  # endpoint-to-endpoint contact
    return True


def segment_crossing_param(p1: Vec, p2: Vec, q1: Vec, q2: Vec,
                           eps: float = EPS) -> float | None:
    """Parameter t on (p1, p2) of a proper transversal crossing with (q1, q2).

    Returns None when the segments do not cross transversally in their
    interiors.  Endpoint contacts and parallel overlaps return None.
    """
    d1 = _sub(p2, p1)
    d2 = _sub(q2, q1)
    denom = _cross(d1, d2)
    len1 = _norm(d1)
    len2 = _norm(d2)
    if abs(denom) < eps * len1 * len2:
        return None
    r = _sub(q1, p1)
    t = _cross(r, d2) / denom
    u = _cross(r, d1) / denom
    tol1 = eps / len1
    tol2 = eps / len2
    if tol1 < t < 1 - tol1 and tol2 < u < 1 - tol2:
        return t
    return None


# ---------------------------------------------------------------------------
# graph model


@dataclass(frozen=True)
class Surface:
    kind: str  # "plane" | "torus"
    period: tuple[float, float] | None = None

    @property
    def genus(self) -> int:
        return 0 if self.kind == "plane" else 1


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int
    coupling: float
    wrap: tuple[int, int]


@dataclass(frozen=True)
class SignedCouplings:
    """Per-edge couplings with a subset of sign-flipped edges.

    ``values[e]`` equals ``-base[e]`` exactly when bit e of ``flipped`` is
    set, and ``base[e]`` otherwise.
    """

    values: tuple[float, ...]
    flipped: int

    @staticmethod
    def from_base(base, flipped: int) -> "SignedCouplings":
        vals = tuple(-k if (flipped >> i) & 1 else k for i, k in enumerate(base))
        return SignedCouplings(vals, flipped)


class EmbeddedGraph:
    """Immutable straight-line embedded graph with rotation system.

    Directed edges are encoded as darts: dart = 2*edge_id + o where o=0
    traverses u->v and o=1 traverses v->u.
    """

    def __init__(self, surface: Surface, positions: list[Vec], edges: list[Edge]):
        self.surface = surface
        self.positions = tuple((float(x), float(y)) for x, y in positions)
        self.edges = tuple(edges)
        self.n_vertices = len(self.positions)
        self.n_edges = len(self.edges)
        self._validate_structure()
        self._build_darts()
        self._validate_embedding()
        self._build_rotation()

    # -- structure ---------------------------------------------------------

    def _validate_structure(self) -> None:
        if self.surface.kind == "torus":
            px, py = self.surface.period
            if px <= 0 or py <= 0:
                raise SchemaError("torus periods must be positive")
        for e in self.edges:
            if e.u == e.v:
                raise EmbeddingError(f"edge {e.id} is a self-loop")
            if not (0 <= e.u < self.n_vertices and 0 <= e.v < self.n_vertices):
                raise SchemaError(f"edge {e.id} references unknown vertex")
            if self.surface.kind == "plane" and e.wrap != (0, 0):
                raise SurfaceError(f"edge {e.id} has nonzero wrap on a plane surface")
        seen: set[tuple[int, int, int, int]] = set()
        for e in self.edges:
            key = (e.u, e.v, e.wrap[0], e.wrap[1])
            rkey = (e.v, e.u, -e.wrap[0], -e.wrap[1])
            if key in seen or rkey in seen:
                raise EmbeddingError(
                    f"edge {e.id} duplicates another edge (same endpoints and wrap)")
            seen.add(key)

    def _period(self) -> Vec:
        if self.surface.kind == "torus":
            return self.surface.period
        return (0.0, 0.0)

    def _build_darts(self) -> None:
        px, py = self._period()
        vecs = []
        for e in self.edges:
            xu, yu = self.positions[e.u]
            xv, yv = self.positions[e.v]
            fwd = (xv + e.wrap[0] * px - xu, yv + e.wrap[1] * py - yu)
            vecs.append(fwd)
            vecs.append((-fwd[0], -fwd[1]))
        self._dart_vec = tuple(vecs)

    # -- dart accessors ------------------------------------------------------

    def dart(self, eid: int, reverse: bool = False) -> int:
        return 2 * eid + (1 if reverse else 0)

    def dart_edge(self, d: int) -> int:
        return d >> 1

    def dart_tail(self, d: int) -> int:
        e = self.edges[d >> 1]
        return e.v if d & 1 else e.u

    def dart_head(self, d: int) -> int:
        e = self.edges[d >> 1]
        return e.u if d & 1 else e.v

    def dart_reverse(self, d: int) -> int:
        return d ^ 1

    def dart_vector(self, d: int) -> Vec:
        return self._dart_vec[d]

    def dart_wrap(self, d: int) -> tuple[int, int]:
        w = self.edges[d >> 1].wrap
        return (-w[0], -w[1]) if d & 1 else w

    def dart_angle(self, d: int) -> float:
        vx, vy = self._dart_vec[d]
        return math.atan2(vy, vx)

    # -- embedding validation ------------------------------------------------

    def _edge_cover_segment(self, eid: int) -> tuple[Vec, Vec]:
        e = self.edges[eid]
        p = self.positions[e.u]
        vx, vy = self._dart_vec[2 * eid]
        return p, (p[0] + vx, p[1] + vy)

    def _validate_embedding(self) -> None:
        segs = [self._edge_cover_segment(e.id) for e in self.edges]
        if self.surface.kind == "plane":
            for i in range(self.n_edges):
                for j in range(i + 1, self.n_edges):
                    if segments_conflict(*segs[i], *segs[j]):
                        raise EmbeddingError(
                            f"edges {i} and {j} intersect away from shared endpoints")
            return
        px, py = self._period()
        for i in range(self.n_edges):
            p1, p2 = segs[i]
            for j in range(i, self.n_edges):
                q1, q2 = segs[j]
                # translate j by every lattice vector with box overlap
                lox = min(p1[0], p2[0]) - max(q1[0], q2[0])
                hix = max(p1[0], p2[0]) - min(q1[0], q2[0])
                loy = min(p1[1], p2[1]) - max(q1[1], q2[1])
                hiy = max(p1[1], p2[1]) - min(q1[1], q2[1])
                for kx in range(math.ceil(lox / px - EPS), math.floor(hix / px + EPS) + 1):
                    for ky in range(math.ceil(loy / py - EPS), math.floor(hiy / py + EPS) + 1):
                        if i == j and kx == 0 and ky == 0:
                            continue
                        t1 = (q1[0] + kx * px, q1[1] + ky * py)
                        t2 = (q2[0] + kx * px, q2[1] + ky * py)
                        if segments_conflict(p1, p2, t1, t2):
                            raise EmbeddingError(
                                f"edges {i} and {j} intersect on the torus "
                                f"(translate {kx},{ky})")

    # -- rotation system -----------------------------------------------------

    def _build_rotation(self) -> None:
        out: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for e in self.edges:
            out[e.u].append(2 * e.id)
            out[e.v].append(2 * e.id + 1)
        rotation = []
        slot_of: list[dict[int, int]] = []
        for v, darts in enumerate(out):
            darts.sort(key=self.dart_angle)
            for a, b in zip(darts, darts[1:]):
                if self.dart_angle(b) - self.dart_angle(a) < EPS:
                    raise EmbeddingError(
                        f"coincident outgoing directions at vertex {v}")
            rotation.append(tuple(darts))
            slot_of.append({self.dart_edge(d): i for i, d in enumerate(darts)})
        self.rotation_darts = tuple(rotation)
        self.rotation = tuple(
            tuple(self.dart_edge(d) for d in darts) for darts in rotation)
        self._slot_of = tuple(slot_of)

    def edge_slot(self, v: int, eid: int) -> int:
        """Position of edge eid in the counterclockwise rotation at v."""
        try:
            return self._slot_of[v][eid]
        except KeyError:
            raise EmbeddingError(f"edge {eid} is not incident to vertex {v}") from None

    def incident_edges(self, v: int) -> tuple[int, ...]:
        return self.rotation[v]

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def out_darts(self, v: int) -> tuple[int, ...]:
        return self.rotation_darts[v]

    def couplings(self) -> tuple[float, ...]:
        return tuple(e.coupling for e in self.edges)

    def components(self) -> int:
        parent = list(range(self.n_vertices))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            ru, rv = find(e.u), find(e.v)
            if ru != rv:
                parent[ru] = rv
        return len({find(v) for v in range(self.n_vertices)})

    def adjacent(self, a: int, b: int) -> bool:
        return any(e.u == a and e.v == b or e.u == b and e.v == a for e in self.edges)


# ---------------------------------------------------------------------------
# loading


def load_graph(doc: dict) -> EmbeddedGraph:
    """Build and validate an EmbeddedGraph from a graph document (dict)."""
    if not isinstance(doc, dict):
        raise SchemaError("graph document must be an object")
    surf = doc.get("surface")
    if not isinstance(surf, dict) or "type" not in surf:
        raise SchemaError("missing or malformed 'surface'")
    kind = surf["type"]
    if kind == "plane":
        surface = Surface("plane")
    elif kind == "torus":
        period = surf.get("period")
        if (not isinstance(period, (list, tuple)) or len(period) != 2
                or not all(isinstance(p, (int, float)) for p in period)):
            raise SchemaError("torus surface requires 'period': [Px, Py]")
        surface = Surface("torus", (float(period[0]), float(period[1])))
    else:
        raise SchemaError(f"unknown surface type {kind!r}")

    vdocs = doc.get("vertices")
    edocs = doc.get("edges")
    if not isinstance(vdocs, list) or not isinstance(edocs, list):
        raise SchemaError("'vertices' and 'edges' must be lists")
    n = len(vdocs)
    positions: list[Vec | None] = [None] * n
    for vd in vdocs:
        if not isinstance(vd, dict) or not {"id", "x", "y"} <= vd.keys():
            raise SchemaError("vertex entries need id, x, y")
        vid = vd["id"]
        if not isinstance(vid, int) or not 0 <= vid < n or positions[vid] is not None:
            raise SchemaError(f"vertex ids must be unique integers 0..{n - 1}")
        positions[vid] = (float(vd["x"]), float(vd["y"]))
    m = len(edocs)
    edges: list[Edge | None] = [None] * m
    for ed in edocs:
        if not isinstance(ed, dict) or not {"id", "u", "v", "L"} <= ed.keys():
            raise SchemaError("edge entries need id, u, v, L")
        eid = ed["id"]
        if not isinstance(eid, int) or not 0 <= eid < m or edges[eid] is not None:
            raise SchemaError(f"edge ids must be unique integers 0..{m - 1}")
        wrap = ed.get("wrap", [0, 0])
        if (not isinstance(wrap, (list, tuple)) or len(wrap) != 2
                or not all(isinstance(w, int) for w in wrap)):
            raise SchemaError(f"edge {eid}: wrap must be a pair of integers")
        if not isinstance(ed["u"], int) or not isinstance(ed["v"], int):
            raise SchemaError(f"edge {eid}: endpoints must be integers")
        edges[eid] = Edge(eid, ed["u"], ed["v"], float(ed["L"]),
                          (wrap[0], wrap[1]))
    return EmbeddedGraph(surface, positions, edges)  # type: ignore[arg-type]


def load_graph_file(path) -> EmbeddedGraph:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
    return load_graph(doc)


# ---------------------------------------------------------------------------
# faces and dual data


@dataclass(frozen=True)
class DualData:
    """Faces of the embedding and the induced dual graph.

    faces[i] is the cyclic tuple of darts whose left side is face i.
    dual_edges[e] = (left face of forward dart, left face of reverse dart).
    """

    faces: tuple[tuple[int, ...], ...]
    face_of_dart: tuple[int, ...]
    dual_edges: tuple[tuple[int, int], ...]
    face_layout: tuple[tuple[Vec, ...], ...] = field(repr=False, default=())
    face_area: tuple[float, ...] = field(repr=False, default=())

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def faces_at_vertex(self, g: EmbeddedGraph, v: int) -> list[int]:
        seen: list[int] = []
        for d in g.out_darts(v):
            f = self.face_of_dart[d]
            if f not in seen:
                seen.append(f)
        return seen


def face_trace(g: EmbeddedGraph) -> DualData:
    """Trace faces by next-edge-in-rotation traversal and validate Euler count.

    The successor of dart d is the rotation predecessor of reverse(d) at
    head(d); every orbit is the boundary of the face lying to the left of its
    darts.
    """
    nd = 2 * g.n_edges
    nxt = [0] * nd
    for v in range(g.n_vertices):
        darts = g.rotation_darts[v]
        pred = {darts[i]: darts[i - 1] for i in range(len(darts))}
        for d in darts:
            nxt[g.dart_reverse(d)] = pred[d]
    face_of = [-1] * nd
    faces: list[tuple[int, ...]] = []
    for d0 in range(nd):
        if face_of[d0] >= 0:
            continue
        orbit = []
        d = d0
        while face_of[d] < 0:
            face_of[d] = len(faces)
            orbit.append(d)
            d = nxt[d]
        faces.append(tuple(orbit))
    V, E, F = g.n_vertices, g.n_edges, len(faces)
    if g.surface.kind == "plane":
        expected = 1 + g.components() + E - V
        if F != expected:
            raise EmbeddingError(
                f"Euler check failed on plane: {F} faces, expected {expected}")
    else:
        if V - E + F != 0:
            raise EmbeddingError(
                f"Euler check failed on torus: V-E+F = {V - E + F}, expected 0")
    dual_edges = tuple(
        (face_of[2 * e], face_of[2 * e + 1]) for e in range(g.n_edges))

    layouts = []
    areas = []
    for orbit in faces:
        pts = []
        pos = (0.0, 0.0)
        for d in orbit:
            pts.append(pos)
            vx, vy = g.dart_vector(d)
            pos = (pos[0] + vx, pos[1] + vy)
        if _norm(pos) > 1e-6:
            raise EmbeddingError("face boundary does not close in the cover")
        area = 0.0
        for i in range(len(pts)):
            x1, y1 = pts[i]
            x2, y2 = pts[(i + 1) % len(pts)]
            area += x1 * y2 - x2 * y1
        layouts.append(tuple(pts))
        areas.append(area / 2.0)
    return DualData(tuple(faces), tuple(face_of), dual_edges,
                    tuple(layouts), tuple(areas))


def dual_path(g: EmbeddedGraph, dual: DualData, a_star: int, b_star: int,
              avoid_vertices: tuple[int, ...] = ()) -> dict:
    """Shortest dual path between two faces, deterministic tie-breaking.

    BFS over the dual graph with adjacency sorted by primal edge id; among
    shortest paths the lexicographically smallest edge-id sequence is
    returned.  When ``avoid_vertices`` is given the search first excludes
    dual edges whose primal edge touches one of those vertices, falling back
    to the unrestricted search (flagged in the result) if that disconnects
    the endpoints.
    """
    if a_star == b_star:
        raise NoPath("dual path endpoints coincide")
    if not (0 <= a_star < dual.n_faces and 0 <= b_star < dual.n_faces):
        raise NoPath("unknown dual vertex")

    def search(excluded: set[int]):
        adj: list[list[tuple[int, int]]] = [[] for _ in range(dual.n_faces)]
        for eid, (fa, fb) in enumerate(dual.dual_edges):
            if eid in excluded or fa == fb:
                continue
            adj[fa].append((fb, eid))
            adj[fb].append((fa, eid))
        for lst in adj:
            lst.sort(key=lambda t: t[1])
        # distance to b_star, then greedy descent from a_star by edge id
        dist = {b_star: 0}
        queue = [b_star]
        while queue:
            nxt_layer: list[int] = []
            for f in queue:
                for nf, _ in adj[f]:
                    if nf not in dist:
                        dist[nf] = dist[f] + 1
                        nxt_layer.append(nf)
            queue = nxt_layer
        if a_star not in dist:
            return None
        path_faces = [a_star]
        path_edges: list[int] = []
        cur = a_star
        while cur != b_star:
            for nf, eid in adj[cur]:
                if dist.get(nf) == dist[cur] - 1:
                    cur = nf
                    path_faces.append(nf)
                    path_edges.append(eid)
                    break
        return path_faces, path_edges

    avoided = True
    result = None
    if avoid_vertices:
        excl = {e.id for e in g.edges if e.u in avoid_vertices or e.v in avoid_vertices}
        result = search(excl)
    if result is None:
        avoided = False
        result = search(set())
    if result is None:
        raise NoPath(f"dual graph does not connect faces {a_star} and {b_star}")
    path_faces, path_edges = result
    flipped = 0
    for eid in path_edges:
        flipped |= 1 << eid
    return {
        "faces": path_faces,
        "edges": path_edges,
        "flipped": flipped,
        "avoided_endpoint_edges": avoided or not avoid_vertices,
    }


# ---------------------------------------------------------------------------
# cycle space and even subgraphs


def cycle_space_basis(g: EmbeddedGraph) -> list[int]:
    """Independent even edge subsets spanning the cycle space (as bitmasks)."""
    parent = list(range(g.n_vertices))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree_adj: list[list[tuple[int, int]]] = [[] for _ in range(g.n_vertices)]
    non_tree: list[Edge] = []
    for e in g.edges:
        ru, rv = find(e.u), find(e.v)
        if ru == rv:
            non_tree.append(e)
        else:
            parent[ru] = rv
            tree_adj[e.u].append((e.v, e.id))
            tree_adj[e.v].append((e.u, e.id))

    def tree_path_mask(a: int, b: int) -> int:
        prev: dict[int, tuple[int, int] | None] = {a: None}
        stack = [a]
        while stack:
            x = stack.pop()
            if x == b:
                break
            for y, eid in tree_adj[x]:
                if y not in prev:
                    prev[y] = (x, eid)
                    stack.append(y)
        mask = 0
        cur = b
        while prev[cur] is not None:
            cur, eid = prev[cur]  # type: ignore[misc]
            mask |= 1 << eid
        return mask

    basis = []
    for e in non_tree:
        basis.append((1 << e.id) | tree_path_mask(e.u, e.v))
    return basis


def iter_even_subgraphs(g: EmbeddedGraph):
    """Yield every even subgraph as an edge bitmask (Gray-code order)."""
    basis = cycle_space_basis(g)
    k = len(basis)
    mask = 0
    yield mask
    gray_prev = 0
    for i in range(1, 1 << k):
        gray = i ^ (i >> 1)
        flip = gray ^ gray_prev
        gray_prev = gray
        mask ^= basis[flip.bit_length() - 1]
        yield mask


def subset_product(K, mask: int) -> float:
    prod = 1.0
    while mask:
        low = mask & -mask
        prod *= K[low.bit_length() - 1]
        mask ^= low
    return prod


def even_subgraph_gf(g: EmbeddedGraph, K, cap: int = 24) -> float:
    """Sum over even subgraphs H of the product of K over the edges of H."""
    if g.n_edges > cap:
        raise CapExceeded(f"{g.n_edges} edges exceeds enumeration cap {cap}")
    total = 0.0
    for mask in iter_even_subgraphs(g):
        total += subset_product(K, mask)
    return total


def is_even_subgraph(g: EmbeddedGraph, mask: int) -> bool:
    deg = [0] * g.n_vertices
    m = mask
    while m:
        low = m & -m
        e = g.edges[low.bit_length() - 1]
        deg[e.u] += 1
        deg[e.v] += 1
        m ^= low
    return all(d % 2 == 0 for d in deg)


def mask_edges(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out
