"""Exception types for numerical-degeneracy conditions."""


class GaussCollideError(Exception):
    """Base class for degeneracy errors raised by this package."""


class DegenerateCovarianceError(GaussCollideError):
    """Covariance determinant collapsed below the representable floor."""


class SingularIntermediateMapError(GaussCollideError):
    """Previous-step channel matrix is numerically singular, the
    intermediate map is undefined at this step."""
