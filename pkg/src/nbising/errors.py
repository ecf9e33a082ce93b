"""Exception types shared across the package."""


class NbisingError(Exception):
    """Base class for all package errors."""


class SchemaError(NbisingError):
    """Graph document is malformed or violates the input schema."""


class EmbeddingError(NbisingError):
    """Geometry is inconsistent: crossing segments, duplicate edges, bad Euler count."""


class SurfaceError(NbisingError):
    """Surface declaration conflicts with edge data (e.g. nonzero wrap on the plane)."""


class CapExceeded(NbisingError):
    """An enumeration cap (edge count, walk length, heap size) was exceeded."""


class NoPath(NbisingError):
    """No path exists between the requested dual vertices."""


class BacktrackError(NbisingError):
    """Antiparallel direction pair: a backtracking walk leaked into an angle computation."""


class GenusMismatch(NbisingError):
    """Homology class genus does not match the surface of the graph."""


class SlotClash(NbisingError):
    """Two vertex passes share an edge slot; crossing parity is undefined there."""


class NotEdgeDisjoint(NbisingError):
    """Mutual crossing count requested for loops that share an edge."""


class OddDegree(NbisingError):
    """Star matchings requested at a vertex of odd degree."""


class NotEven(NbisingError):
    """Operation requires an even subgraph (all degrees even)."""


class NotTNBError(NbisingError):
    """Walk is not totally non-backtracking where one was required."""


class MalformedPyramid(NbisingError):
    """Heap is not a valid oriented pyramid of edge-disjoint loops."""


class ResidueError(NbisingError):
    """Imaginary residue of a transfer-operator trace exceeded tolerance."""


class AdjacentUnsupported(NbisingError):
    """Walk-formula correlations for adjacent spin pairs are out of scope."""


class NonpositiveCoupling(NbisingError):
    """Dual couplings require strictly positive primal couplings."""


class SystemMismatch(NbisingError):
    """Heaps built over different concurrency systems cannot be combined."""


class UnknownPiece(NbisingError):
    """Piece type is not part of the concurrency system."""


class ClosureError(NbisingError):
    """Failed to build a valid closure polyline for an open walk sum."""
