"""Exception types shared across the package."""


class BraneTileError(Exception):
    """Base class for all errors raised by this package."""


class TilingFormatError(BraneTileError):
    """Raised when tiling input data is malformed or inconsistent."""


class ConsistencyError(BraneTileError):
    """Raised when a tiling violates a structural hypothesis the
    computations rely on (torsion in the weight lattice, a matching
    missing a face, a vertex with no incident face of some sign, ...)."""


class DegenerateInputError(BraneTileError):
    """Raised when an input is valid but outside the supported regime,
    e.g. a stability parameter lying on a wall."""
