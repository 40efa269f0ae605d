"""Exception types shared across the package."""


class DomainError(ValueError):
    """Raised when an argument lies outside the mathematical domain of an
    operation (non-positive beta parameters, invalid orders, weights that do
    not form a convex combination, and so on)."""


class MomentBoundaryError(ValueError):
    """Raised when a moment sequence lies on, outside, or numerically too
    close to the boundary of the moment space for the requested operation."""


class ConvergenceError(RuntimeError):
    """Raised when an iterative scheme (quadrature refinement, boundary value
    shooting, projection search, Karcher flow) exhausts its budget without
    meeting its tolerance."""


class BoundaryEscapeError(RuntimeError):
    """Raised when a geodesic leaves the open parameter quadrant, i.e. either
    coordinate falls to the escape threshold before integration finishes."""
