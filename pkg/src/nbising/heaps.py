"""Heaps of pieces over a concurrency relation.

A heap is stored in its unique fallen (canonical level) form: every piece
sits at one plus the maximum level of the concurrent pieces below it.  Two
pieces on the same level are never concurrent, so each level is a sorted
tuple of labels and heap equality is level-form equality.

The piece-weight generating identity (heaps with restricted maximal labels
equal a ratio of signed trivial-heap polynomials) is checked coefficient by
coefficient over truncated integer power series, one formal variable per
piece type, so the comparison is exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .errors import CapExceeded, SystemMismatch, UnknownPiece


@dataclass(frozen=True)
class ConcurrencySystem:
    """Finite set of piece types with a symmetric reflexive relation."""

    pieces: tuple[Any, ...]
    relation: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if len(set(self.pieces)) != len(self.pieces):
            raise ValueError("piece types must be distinct")
        closed = set()
        known = set(self.pieces)
        for a, b in self.relation:
            if a not in known or b not in known:
                raise UnknownPiece(f"relation mentions unknown piece {(a, b)}")
            closed.add((a, b))
            closed.add((b, a))
        for p in self.pieces:
            closed.add((p, p))
        object.__setattr__(self, "relation", frozenset(closed))

    def concurrent(self, a, b) -> bool:
        return (a, b) in self.relation

    def __contains__(self, piece) -> bool:
        return piece in self.pieces


class EdgeOverlapSystem:
    """Concurrency by shared undirected edges, for loop-labelled pieces.

    Labels must expose an ``edge_set`` attribute.  The piece universe is not
    enumerable, so only stacking operations are available over this system.
    """

    pieces = None

    @staticmethod
    def concurrent(a, b) -> bool:
        return bool(a.edge_set & b.edge_set)

    def __contains__(self, piece) -> bool:
        return hasattr(piece, "edge_set")


EDGE_OVERLAP = EdgeOverlapSystem()


@dataclass(frozen=True)
class Heap:
    """Canonical fallen form: levels bottom-up, each a sorted label tuple."""

    levels: tuple[tuple[Any, ...], ...] = ()

    @property
    def n_pieces(self) -> int:
        return sum(len(lv) for lv in self.levels)

    def pieces(self) -> Iterable[tuple[int, int, Any]]:
        for li, lv in enumerate(self.levels):
            for pi, label in enumerate(lv):
                yield li, pi, label

    def labels(self) -> list:
        return [label for _, _, label in self.pieces()]

    def __bool__(self) -> bool:
        return bool(self.levels)


EMPTY_HEAP = Heap()


def push(sys, h: Heap, piece) -> Heap:
    """Drop one piece on top of a heap."""
    if piece not in sys:
        raise UnknownPiece(f"{piece!r} is not a piece type of this system")
    level = 0
    for li in range(len(h.levels) - 1, -1, -1):
        if any(sys.concurrent(x, piece) for x in h.levels[li]):
            level = li + 1
            break
    levels = [list(lv) for lv in h.levels]
    while len(levels) <= level:
        levels.append([])
    levels[level].append(piece)
    levels[level].sort()
    return Heap(tuple(tuple(lv) for lv in levels))


def add(sys, h1: Heap, h2: Heap, sys2=None) -> Heap:
    """Place h2 on top of h1 (piece by piece in level order)."""
    if sys2 is not None and sys2 is not sys:
        raise SystemMismatch("heaps built over different concurrency systems")
    out = h1
    for _, _, label in h2.pieces():
        out = push(sys, out, label)
    return out


def maximal_pieces(sys, h: Heap) -> list[tuple[int, int, Any]]:
    """Pieces with no concurrent piece above them."""
    out = []
    for li, pi, label in h.pieces():
        blocked = any(
            sys.concurrent(label, other)
            for lv in h.levels[li + 1:]
            for other in lv
        )
        if not blocked:
            out.append((li, pi, label))
    return out


def is_pyramid(sys, h: Heap) -> bool:
    return len(maximal_pieces(sys, h)) == 1


def remove_piece(h: Heap, li: int, pi: int, sys) -> Heap:
    """Remove one piece and let everything fall back to canonical form."""
    rest = [label for lj, pj, label in h.pieces() if (lj, pj) != (li, pi)]
    out = EMPTY_HEAP
    # re-push in the original level order, which preserves relative order
    for label in rest:
        out = push(sys, out, label)
    return out


@dataclass(frozen=True)
class MarkedHeap:
    """Heap with auxiliary labels attached to (some of) its maximal pieces."""

    heap: Heap
    marks: tuple[tuple[tuple[int, int], Any], ...] = ()

    def validate(self, sys) -> None:
        maxima = {(li, pi) for li, pi, _ in maximal_pieces(sys, self.heap)}
        for key, _ in self.marks:
            if key not in maxima:
                raise ValueError(f"mark on non-maximal piece {key}")


def trivial_heaps(sys: ConcurrencySystem) -> list[Heap]:
    """All antichains: subsets of pairwise non-concurrent piece types."""
    out: list[Heap] = []

    pieces = sorted(sys.pieces)

    def grow(prefix: list, start: int):
        out.append(Heap((tuple(prefix),)) if prefix else EMPTY_HEAP)
        for i in range(start, len(pieces)):
            p = pieces[i]
            if all(not sys.concurrent(p, q) for q in prefix):
                grow(prefix + [p], i + 1)

    grow([], 0)
    return out


def enumerate_heaps(sys: ConcurrencySystem, max_pieces: int,
                    restrict_max_labels_to=None, cap: int = 10) -> list[Heap]:
    """All heaps with at most max_pieces pieces, duplicate-free.

    With ``restrict_max_labels_to`` only heaps whose maximal labels all lie
    in the given set are returned (the empty heap qualifies vacuously).
    """
    if max_pieces > cap:
        raise CapExceeded(f"max_pieces {max_pieces} exceeds cap {cap}")
    seen: set[Heap] = {EMPTY_HEAP}
    frontier = [EMPTY_HEAP]
    for _ in range(max_pieces):
        nxt = []
        for h in frontier:
            for p in sys.pieces:
                h2 = push(sys, h, p)
                if h2 not in seen:
                    seen.add(h2)
                    nxt.append(h2)
        frontier = nxt
    heaps = sorted(seen, key=lambda h: (h.n_pieces, h.levels))
    if restrict_max_labels_to is None:
        return heaps
    allowed = set(restrict_max_labels_to)
    return [
        h for h in heaps
        if all(label in allowed for _, _, label in maximal_pieces(sys, h))
    ]


# ---------------------------------------------------------------------------
# truncated multivariate integer series


def _poly_mul(a: dict, b: dict, max_deg: int) -> dict:
    out: dict[tuple[int, ...], int] = {}
    for ea, ca in a.items():
        da = sum(ea)
        for eb, cb in b.items():
            if da + sum(eb) > max_deg:
                continue
            key = tuple(x + y for x, y in zip(ea, eb))
            out[key] = out.get(key, 0) + ca * cb
    return {k: v for k, v in out.items() if v != 0}


def _poly_inverse(p: dict, nvars: int, max_deg: int) -> dict:
    one = (0,) * nvars
    if p.get(one) != 1:
        raise ValueError("series inverse requires constant term 1")
    r = {k: -v for k, v in p.items() if k != one}
    out = {one: 1}
    power = {one: 1}
    for _ in range(max_deg):
        power = _poly_mul(power, r, max_deg)
        if not power:
            break
        for k, v in power.items():
            out[k] = out.get(k, 0) + v
    return {k: v for k, v in out.items() if v != 0}


def _heap_monomial(h: Heap, var_of: Mapping, nvars: int) -> tuple[int, ...]:
    exp = [0] * nvars
    for _, _, label in h.pieces():
        exp[var_of[label]] += 1
    return tuple(exp)


@dataclass(frozen=True)
class RatioIdentityReport:
    ok: bool
    degree: int
    n_heaps: int
    first_mismatch: tuple | None = None


def check_ratio_identity(sys: ConcurrencySystem, restrict_to,
                         truncation_degree: int,
                         variables: Mapping | None = None,
                         cap: int = 10) -> RatioIdentityReport:
    """Verify the heap generating-function ratio identity up to a degree.

    Compares, coefficient by coefficient up to total degree N, the sum of
    monomials over heaps whose maximal labels lie in ``restrict_to`` against
    the ratio of signed trivial-heap polynomials (complement set over full
    set), expanded as a power series.
    """
    if truncation_degree > cap:
        raise CapExceeded(
            f"truncation degree {truncation_degree} exceeds cap {cap}")
    M = set(restrict_to)
    if variables is None:
        variables = {p: i for i, p in enumerate(sorted(sys.pieces))}
    nvars = max(variables.values()) + 1 if variables else 0
    N = truncation_degree

    heaps = enumerate_heaps(sys, N, restrict_max_labels_to=M, cap=max(cap, N))
    lhs: dict[tuple[int, ...], int] = {}
    for h in heaps:
        key = _heap_monomial(h, variables, nvars)
        lhs[key] = lhs.get(key, 0) + 1

    def trivial_poly(allowed) -> dict:
        sub = ConcurrencySystem(
            tuple(sorted(allowed)),
            frozenset((a, b) for a, b in sys.relation if a in allowed and b in allowed),
        )
        poly: dict[tuple[int, ...], int] = {}
        for t in trivial_heaps(sub):
            key = _heap_monomial(t, variables, nvars)
            sign = -1 if t.n_pieces % 2 else 1
            poly[key] = poly.get(key, 0) + sign
        return poly

    num = trivial_poly(set(sys.pieces) - M)
    den = trivial_poly(set(sys.pieces))
    rhs = _poly_mul(num, _poly_inverse(den, nvars, N), N)

    keys = {k for k in itertools.chain(lhs, rhs) if sum(k) <= N}
    for k in sorted(keys):
        if lhs.get(k, 0) != rhs.get(k, 0):
            return RatioIdentityReport(False, N, len(heaps),
                                       (k, lhs.get(k, 0), rhs.get(k, 0)))
    return RatioIdentityReport(True, N, len(heaps))
