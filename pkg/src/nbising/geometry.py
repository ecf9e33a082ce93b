"""Turning numbers, winding, combinatorial crossings, and sector signs.

Torus homology convention (recorded in CLI report metadata): the two cut
lines avoid all vertices; the horizontal cut pairs a closed walk to its
vertical winding (Wy mod 2) and the vertical cut to its horizontal winding
(Wx mod 2).  A sector with bits (a, b) pairs a walk of winding (Wx, Wy) to
a*Wx + b*Wy mod 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .embedding import EmbeddedGraph
from .errors import BacktrackError, EmbeddingError, GenusMismatch, NotEdgeDisjoint, SlotClash

TURN_TOL = 1e-6


@dataclass(frozen=True)
class HomologyClass:
    """Z2 homology sector: 2g bits, (a_k, b_k) per handle."""

    bits: tuple[int, ...]

    def __post_init__(self):
        if len(self.bits) % 2 != 0 or any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be a vector of 2g values in {0,1}")

    @property
    def genus(self) -> int:
        return len(self.bits) // 2


PLANE_SECTOR = HomologyClass(())

TORUS_SECTORS = tuple(HomologyClass((a, b)) for a in (0, 1) for b in (0, 1))


def sectors_for(g: EmbeddedGraph) -> tuple[HomologyClass, ...]:
    return (PLANE_SECTOR,) if g.surface.kind == "plane" else TORUS_SECTORS


def exterior_angle(dir_in, dir_out) -> float:
    """Signed turn from dir_in to dir_out, counterclockwise positive, in (-pi, pi)."""
    cx = dir_in[0] * dir_out[1] - dir_in[1] * dir_out[0]
    dt = dir_in[0] * dir_out[0] + dir_in[1] * dir_out[1]
    n1 = math.hypot(*dir_in)
    n2 = math.hypot(*dir_out)
    if n1 == 0.0 or n2 == 0.0:
        raise BacktrackError("zero direction vector")
    ang = math.atan2(cx, dt)
    if abs(abs(ang) - math.pi) < 1e-9:
        raise BacktrackError("antiparallel directions: backtracking step")
    return ang


def polyline_turning(points, closed: bool = True) -> float:
    """Total exterior-angle turning of a polygonal chain, in radians."""
    dirs = []
    n = len(points)
    rng = range(n) if closed else range(n - 1)
    for i in rng:
        p = points[i]
        q = points[(i + 1) % n]
        dirs.append((q[0] - p[0], q[1] - p[1]))
    total = 0.0
    pairs = len(dirs) if closed else len(dirs) - 1
    for i in range(pairs):
        total += exterior_angle(dirs[i], dirs[(i + 1) % len(dirs)])
    return total


def round_turns(total_angle: float) -> int:
    turns = total_angle / (2 * math.pi)
    nearest = round(turns)
    if abs(turns - nearest) >= TURN_TOL:
        raise EmbeddingError(
            f"turning angle {total_angle} is not an integer number of turns")
    return int(nearest)


def walk_turning_angle(g: EmbeddedGraph, walk) -> float:
    """Sum of exterior angles along a closed walk (universal-cover directions)."""
    dirs = [g.dart_vector(d) for d in walk.darts]
    total = 0.0
    for i in range(len(dirs)):
        total += exterior_angle(dirs[i], dirs[(i + 1) % len(dirs)])
    return total


def turning_number(g: EmbeddedGraph, walk) -> int:
    """Integer turning number of a closed non-backtracking walk."""
    if not walk.closed:
        raise ValueError("turning_number requires a closed walk")
    return round_turns(walk_turning_angle(g, walk))


def winding(g: EmbeddedGraph, walk) -> tuple[int, int]:
    """Net displacement of a closed walk in lattice periods; (0,0) on the plane."""
    wx = wy = 0
    for d in walk.darts:
        dx, dy = g.dart_wrap(d)
        wx += dx
        wy += dy
    return (wx, wy)


def pairing(g: EmbeddedGraph, alpha: HomologyClass, walk) -> int:
    """Z2 intersection pairing of a sector against a closed walk."""
    if alpha.genus != g.surface.genus:
        raise GenusMismatch(
            f"sector genus {alpha.genus} vs surface genus {g.surface.genus}")
    if alpha.genus == 0:
        return 0
    wx, wy = winding(g, walk)
    a, b = alpha.bits
    return (a * wx + b * wy) % 2


def sector_sign(alpha: HomologyClass) -> int:
    """Sign attached to a homology sector in the partition-function average."""
    sign = 1
    for k in range(alpha.genus):
        a, b = alpha.bits[2 * k], alpha.bits[2 * k + 1]
        if (1 + a + b + a * b) % 2 == 1:
            sign = -sign
    return sign


def closed_walk_sign(g: EmbeddedGraph, alpha: HomologyClass, walk) -> int:
    """(-1)^(turning + pairing) for a closed non-backtracking walk."""
    tau = turning_number(g, walk)
    return -1 if (tau + pairing(g, alpha, walk)) % 2 else 1


# ---------------------------------------------------------------------------
# combinatorial crossings


def _cyclic_between(i: int, j: int, x: int) -> bool:
    """True if x lies strictly inside the cyclic arc from i to j (going up)."""
    if i < j:
        return i < x < j
    return x > i or x < j


def vertex_crossing(g: EmbeddedGraph, v: int, pass_a: tuple[int, int],
                    pass_b: tuple[int, int]) -> int:
    """1 if two passes through v interleave in the rotation order, else 0.

    Each pass is an (edge_in, edge_out) pair of edge ids incident to v.  The
    four slots must be distinct; passes sharing an edge have no well-defined
    crossing parity.
    """
    slots_a = (g.edge_slot(v, pass_a[0]), g.edge_slot(v, pass_a[1]))
    slots_b = (g.edge_slot(v, pass_b[0]), g.edge_slot(v, pass_b[1]))
    if len({*slots_a, *slots_b}) < 4:
        raise SlotClash(f"passes at vertex {v} share an edge slot")
    inside = _cyclic_between(slots_a[0], slots_a[1], slots_b[0])
    inside2 = _cyclic_between(slots_a[0], slots_a[1], slots_b[1])
    return 1 if inside != inside2 else 0


def _passes_by_vertex(g: EmbeddedGraph, walk) -> dict[int, list[tuple[int, int]]]:
    """(edge_in, edge_out) pass at every vertex visit of a closed walk."""
    darts = walk.darts
    out: dict[int, list[tuple[int, int]]] = {}
    n = len(darts)
    for i in range(n):
        d_in = darts[i]
        d_out = darts[(i + 1) % n]
        v = g.dart_head(d_in)
        out.setdefault(v, []).append((g.dart_edge(d_in), g.dart_edge(d_out)))
    return out


def self_crossings(g: EmbeddedGraph, loop) -> int:
    """Crossings among the passes of one edge-simple closed walk."""
    walk = loop.walk(g) if hasattr(loop, "walk") else loop
    total = 0
    for v, passes in _passes_by_vertex(g, walk).items():
        for i in range(len(passes)):
            for j in range(i + 1, len(passes)):
                total += vertex_crossing(g, v, passes[i], passes[j])
    return total


def mutual_crossings(g: EmbeddedGraph, loop_a, loop_b) -> int:
    """Crossings between the passes of two edge-disjoint loops."""
    wa = loop_a.walk(g) if hasattr(loop_a, "walk") else loop_a
    wb = loop_b.walk(g) if hasattr(loop_b, "walk") else loop_b
    ea = {g.dart_edge(d) for d in wa.darts}
    eb = {g.dart_edge(d) for d in wb.darts}
    if ea & eb:
        raise NotEdgeDisjoint("loops share an edge")
    pa = _passes_by_vertex(g, wa)
    pb = _passes_by_vertex(g, wb)
    total = 0
    for v in set(pa) & set(pb):
        for x in pa[v]:
            for y in pb[v]:
                total += vertex_crossing(g, v, x, y)
    return total


def crossing_count(g: EmbeddedGraph, items) -> int:
    """Self crossings of one loop, or mutual crossings of an edge-disjoint pair."""
    if isinstance(items, tuple) and len(items) == 2:
        return mutual_crossings(g, items[0], items[1])
    return self_crossings(g, items)


# ---------------------------------------------------------------------------
# cut-line oracle (used by tests to validate the winding-based pairing)


def cut_line_crossings(g: EmbeddedGraph, walk) -> tuple[int, int]:
    """Count crossings of a closed walk with explicit torus cut lines, mod 2.

    Returns (crossings with the vertical cut, crossings with the horizontal
    cut) which should equal (|Wx|, |Wy|) mod 2.  Cut lines sit just below the
    minimum-coordinate vertex, offset by half the minimum coordinate gap.
    """
    if g.surface.kind != "torus":
        return (0, 0)
    px, py = g.surface.period
    xs = sorted({p[0] % px for p in g.positions})
    ys = sorted({p[1] % py for p in g.positions})

    def offset(vals, period):
        gaps = [(vals[(i + 1) % len(vals)] - vals[i]) % period for i in range(len(vals))]
        gaps = [gv for gv in gaps if gv > 1e-12] or [period]
        return (vals[0] - min(gaps) / 2) % period

    x_cut = offset(xs, px)
    y_cut = offset(ys, py)
    vert = horiz = 0
    pos = g.positions[g.dart_tail(walk.darts[0])]
    for d in walk.darts:
        vx, vy = g.dart_vector(d)
        new = (pos[0] + vx, pos[1] + vy)
        # crossings of x = x_cut + k*px between pos and new
        vert += abs(math.floor((new[0] - x_cut) / px) - math.floor((pos[0] - x_cut) / px))
        horiz += abs(math.floor((new[1] - y_cut) / py) - math.floor((pos[1] - y_cut) / py))
        pos = new
    return (vert % 2, horiz % 2)
