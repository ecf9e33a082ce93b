"""Directed walks, loops, star matchings, and loop decompositions.

A loop is an equivalence class of closed edge-simple walks under cyclic
shift and reversal, stored by a canonical representative.  Decompositions of
an even subgraph into edge-disjoint loops are generated from per-vertex
perfect matchings of the incident half-edges, whose crossing parities carry
the sign structure of the subgraph weight.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .embedding import EmbeddedGraph, mask_edges
from .errors import CapExceeded, NotEven, OddDegree
from . import geometry


@dataclass(frozen=True, order=True)
class DirectedWalk:
    """Walk as a sequence of darts (directed edges); rooted and oriented."""

    darts: tuple[int, ...]
    closed: bool = True

    @property
    def length(self) -> int:
        return len(self.darts)

    def start(self, g: EmbeddedGraph) -> int:
        return g.dart_tail(self.darts[0])

    def end(self, g: EmbeddedGraph) -> int:
        return g.dart_head(self.darts[-1])

    def vertices(self, g: EmbeddedGraph) -> list[int]:
        out = [g.dart_tail(self.darts[0])]
        out.extend(g.dart_head(d) for d in self.darts)
        return out

    def edge_ids(self) -> tuple[int, ...]:
        return tuple(d >> 1 for d in self.darts)

    def edge_multiset(self) -> tuple[tuple[int, int], ...]:
        counts: dict[int, int] = {}
        for d in self.darts:
            counts[d >> 1] = counts.get(d >> 1, 0) + 1
        return tuple(sorted(counts.items()))

    def reversed_(self) -> "DirectedWalk":
        return DirectedWalk(tuple(d ^ 1 for d in reversed(self.darts)), self.closed)

    def rotated(self, k: int) -> "DirectedWalk":
        if not self.closed:
            raise ValueError("only closed walks can be rerooted")
        k %= len(self.darts)
        return DirectedWalk(self.darts[k:] + self.darts[:k], True)

    def validate(self, g: EmbeddedGraph, require_nb: bool = False) -> None:
        darts = self.darts
        for i in range(len(darts) - 1):
            if g.dart_head(darts[i]) != g.dart_tail(darts[i + 1]):
                raise ValueError(f"walk breaks adjacency at step {i}")
        if self.closed and g.dart_head(darts[-1]) != g.dart_tail(darts[0]):
            raise ValueError("closed walk does not return to its start")
        if require_nb and not self.is_nb():
            raise ValueError("walk backtracks")

    def is_nb(self) -> bool:
        darts = self.darts
        n = len(darts)
        rng = range(n) if self.closed else range(n - 1)
        for i in rng:
            if darts[i] >> 1 == darts[(i + 1) % n] >> 1:
                return False
        return True

    def is_edge_simple(self) -> bool:
        ids = self.edge_ids()
        return len(set(ids)) == len(ids)

    def coupling_product(self, K) -> float:
        prod = 1.0
        for d in self.darts:
            prod *= K[d >> 1]
        return prod


def canonical_loop_darts(darts: tuple[int, ...]) -> tuple[int, ...]:
    """Canonical rooted orientation: smallest edge id first, then the
    orientation whose second edge id is lexicographically smaller."""
    fwd = tuple(darts)
    rev = tuple(d ^ 1 for d in reversed(darts))

    def rooted(seq: tuple[int, ...]) -> tuple[int, ...]:
        ids = [d >> 1 for d in seq]
        k = ids.index(min(ids))
        return seq[k:] + seq[:k]

    a, b = rooted(fwd), rooted(rev)
    if len(a) == 1:
        return min(a, b)
    ka = (tuple(d >> 1 for d in a), a)
    kb = (tuple(d >> 1 for d in b), b)
    return a if ka <= kb else b


@dataclass(frozen=True, order=True)
class Loop:
    """Closed edge-simple walk up to cyclic shift and reversal."""

    darts: tuple[int, ...]

    @property
    def edge_set(self) -> frozenset[int]:
        return frozenset(d >> 1 for d in self.darts)

    @property
    def length(self) -> int:
        return len(self.darts)

    def walk(self, g: EmbeddedGraph | None = None) -> DirectedWalk:
        return DirectedWalk(self.darts, True)

    @staticmethod
    def from_darts(darts, g: EmbeddedGraph | None = None) -> "Loop":
        darts = tuple(darts)
        ids = [d >> 1 for d in darts]
        if len(set(ids)) != len(ids):
            raise ValueError("loop representative must be edge-simple")
        if g is not None:
            DirectedWalk(darts, True).validate(g)
        return Loop(canonical_loop_darts(darts))

    @staticmethod
    def from_walk(walk: DirectedWalk, g: EmbeddedGraph | None = None) -> "Loop":
        if not walk.closed:
            raise ValueError("loops come from closed walks")
        return Loop.from_darts(walk.darts, g)


# ---------------------------------------------------------------------------
# star matchings


@dataclass(frozen=True)
class StarMatching:
    vertex: int
    pairs: tuple[tuple[int, int], ...]  # (edge id, edge id), each pair sorted
    crossings: int


def _slot_matchings(slots: list[int]):
    """Perfect matchings of a list of distinct rotation slots."""
    if not slots:
        yield []
        return
    first = slots[0]
    for i in range(1, len(slots)):
        partner = slots[i]
        rest = slots[1:i] + slots[i + 1:]
        for sub in _slot_matchings(rest):
            yield [(first, partner)] + sub


def _pairs_cross(p: tuple[int, int], q: tuple[int, int]) -> bool:
    a1, a2 = p
    inside_q1 = geometry._cyclic_between(a1, a2, q[0])
    inside_q2 = geometry._cyclic_between(a1, a2, q[1])
    return inside_q1 != inside_q2


def star_matchings(g: EmbeddedGraph, H_mask: int, v: int) -> list[StarMatching]:
    """All perfect matchings of the H-edges at v with their crossing counts."""
    incident = [e for e in g.incident_edges(v) if (H_mask >> e) & 1]
    if len(incident) % 2 != 0:
        raise OddDegree(f"vertex {v} has odd degree {len(incident)} in H")
    slot_of = {e: g.edge_slot(v, e) for e in incident}
    slots = sorted(slot_of.values())
    edge_at = {slot_of[e]: e for e in incident}
    out = []
    for matching in _slot_matchings(slots):
        crossings = sum(
            1 for (p, q) in itertools.combinations(matching, 2) if _pairs_cross(p, q))
        pairs = tuple(
            tuple(sorted((edge_at[s1], edge_at[s2]))) for s1, s2 in matching)
        out.append(StarMatching(v, tuple(sorted(pairs)), crossings))
    return out


@dataclass(frozen=True)
class PfaffianReport:
    degree: int
    lhs: float
    rhs: float
    ok: bool
    n_matchings: int


def pfaffian_check(d: int, K, rel_tol: float = 1e-12) -> PfaffianReport:
    """Check that signed matchings of a star reproduce the plain product.

    For couplings K_1..K_d at a vertex of even degree d, the sum over
    perfect matchings of (-1)^crossings times the product of sqrt(K_i K_j)
    over matched pairs equals the product of sqrt(K_i).  Couplings must be
    positive (square roots are taken literally here).
    """
    if d % 2 != 0 or d < 2:
        raise OddDegree("degree must be even and at least 2")
    if len(K) != d or any(k <= 0 for k in K):
        raise ValueError("need d positive couplings")
    slots = list(range(d))
    lhs = 0.0
    count = 0
    for matching in _slot_matchings(slots):
        count += 1
        crossings = sum(
            1 for p, q in itertools.combinations(matching, 2) if _pairs_cross(p, q))
        term = 1.0
        for i, j in matching:
            term *= math.sqrt(K[i] * K[j])
        lhs += -term if crossings % 2 else term
    rhs = 1.0
    for k in K:
        rhs *= math.sqrt(k)
    ok = abs(lhs - rhs) <= rel_tol * max(abs(lhs), abs(rhs))
    return PfaffianReport(d, lhs, rhs, ok, count)


# ---------------------------------------------------------------------------
# decompositions


@dataclass(frozen=True)
class Decomposition:
    loops: tuple[Loop, ...]  # sorted

    @staticmethod
    def of(loops) -> "Decomposition":
        return Decomposition(tuple(sorted(loops)))


def _resolve_loops(g: EmbeddedGraph, H_mask: int,
                   partner: dict[tuple[int, int], int]) -> tuple[Loop, ...]:
    """Follow matched half-edges into closed loops covering H."""
    unused = set(mask_edges(H_mask))
    loops = []
    while unused:
        e0 = min(unused)
        d = 2 * e0  # forward orientation of the smallest unused edge
        darts = []
        while True:
            darts.append(d)
            unused.discard(d >> 1)
            v = g.dart_head(d)
            f = partner[(v, d >> 1)]
            nxt_edge = g.edges[f]
            d = 2 * f if nxt_edge.u == v else 2 * f + 1
            if d == darts[0]:
                break
        loops.append(Loop.from_darts(darts, g))
    return tuple(sorted(loops))


def decompositions(g: EmbeddedGraph, H_mask: int, cap: int = 20) -> list[Decomposition]:
    """All decompositions of an even subgraph into edge-disjoint loops.

    One decomposition per choice of a perfect matching at every vertex; the
    count is the product of (deg-1)!! over the vertices of H.
    """
    edges = mask_edges(H_mask)
    if len(edges) > cap:
        raise CapExceeded(f"{len(edges)} edges exceeds decomposition cap {cap}")
    deg: dict[int, int] = {}
    for e in edges:
        deg[g.edges[e].u] = deg.get(g.edges[e].u, 0) + 1
        deg[g.edges[e].v] = deg.get(g.edges[e].v, 0) + 1
    if any(d % 2 for d in deg.values()):
        raise NotEven("subgraph has a vertex of odd degree")
    if not edges:
        return [Decomposition(())]
    verts = sorted(deg)
    choices = [star_matchings(g, H_mask, v) for v in verts]
    out = []
    for combo in itertools.product(*choices):
        partner: dict[tuple[int, int], int] = {}
        for sm in combo:
            for e1, e2 in sm.pairs:
                partner[(sm.vertex, e1)] = e2
                partner[(sm.vertex, e2)] = e1
        out.append(Decomposition(_resolve_loops(g, H_mask, partner)))
    expected = 1
    for d in deg.values():
        for k in range(d - 1, 0, -2):
            expected *= k
    assert len(out) == expected and len(set(out)) == expected, \
        "matchings and decompositions failed to correspond one-to-one"
    return out


def decomposition_weight(g: EmbeddedGraph, dec: Decomposition, K) -> float:
    """Signed weight: crossing parities (self and mutual) times the coupling
    product over the covered edges."""
    sign = 1
    loops = dec.loops
    for lp in loops:
        if geometry.self_crossings(g, lp.walk()) % 2:
            sign = -sign
    for a, b in itertools.combinations(loops, 2):
        if geometry.mutual_crossings(g, a.walk(), b.walk()) % 2:
            sign = -sign
    prod = 1.0
    for lp in loops:
        for e in lp.edge_set:
            prod *= K[e]
    return sign * prod


def decomposition_weight_sectored(g: EmbeddedGraph, dec: Decomposition, K,
                                  alpha: geometry.HomologyClass) -> float:
    """Single-sector multiplicative weight of a decomposition.

    Each loop contributes (-1)^(turning + pairing + 1); averaging over
    sectors with their signs recovers the crossing-parity weight.
    """
    sign = 1
    for lp in dec.loops:
        walk = lp.walk()
        tau = geometry.turning_number(g, walk)
        pair = geometry.pairing(g, alpha, walk)
        if (tau + pair + 1) % 2:
            sign = -sign
    prod = 1.0
    for lp in dec.loops:
        for e in lp.edge_set:
            prod *= K[e]
    return sign * prod
