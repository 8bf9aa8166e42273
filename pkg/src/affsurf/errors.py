"""Exception types shared across the toolkit."""


class AffSurfError(Exception):
    """Base class for all toolkit errors."""


class InputError(AffSurfError, ValueError):
    """Invalid argument: dimension mismatch, bad parameter, malformed config."""


class UnsupportedBodyError(AffSurfError, TypeError):
    """Operation not defined for this body kind (e.g. curvature of a polygon)."""


class UnsupportedDimensionError(AffSurfError, ValueError):
    """Operation restricted to a specific ambient dimension."""


class AdmissibilityError(AffSurfError, ValueError):
    """Body fails the strict-convexity / positive-curvature requirements."""


class ApproximationError(AffSurfError, RuntimeError):
    """A fitted representation missed its accuracy target."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class EvaluationError(AffSurfError, RuntimeError):
    """An integrand or oracle produced a non-finite value."""


class UnboundedBodyError(AffSurfError, RuntimeError):
    """An illumination surface body is unbounded at the requested level."""

    def __init__(self, message, rays=None):
        super().__init__(message)
        self.rays = list(rays) if rays else []
