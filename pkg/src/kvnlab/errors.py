"""Exception types shared across the package.

Configuration-level problems (bad parameters, mismatched grids, unsupported
derivative orders) raise ``ValueError`` subclasses; violations detected while
a computation is running (boundary mass, singular auxiliary solutions,
inconsistent numerics) raise ``PhysicsError`` subclasses.  The CLI maps the
two families to different exit codes.
"""


class KvnLabError(Exception):
    """Base class for package-specific errors."""


class GridMismatchError(KvnLabError, ValueError):
    """Two fields or operators live on incompatible grids."""


class DegenerateInputError(KvnLabError, ValueError):
    """An input is outside the validity envelope of the requested operation."""


class PhysicsError(KvnLabError, RuntimeError):
    """A runtime check on the physics of a computation failed."""


class BoundaryMassError(PhysicsError):
    """Probability mass reached the edge of a periodic domain."""
