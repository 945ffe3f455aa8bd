"""Exception types shared across the package."""


class MeshError(Exception):
    """Invalid mesh topology or geometry."""


class NonManifoldEdgeError(MeshError):
    """An edge is shared by three or more triangles."""


class DegenerateTriangleError(MeshError):
    """A triangle has zero or negative signed area."""


class NonPositiveJacobian(Exception):
    """The deformation Jacobian J dropped to zero or below at a quadrature
    point, so the logarithmic energy terms are undefined.  Carries the
    offending element index when known."""

    def __init__(self, message, element=None):
        super().__init__(message)
        self.element = element


class LinearSolveFailure(Exception):
    """Sparse factorization failed or did not reach the required accuracy."""


class NoConvergence(Exception):
    """Newton iteration exceeded the allowed number of iterations."""


class LineSearchExhausted(Exception):
    """No admissible step length (J > 0 everywhere) could be found."""
