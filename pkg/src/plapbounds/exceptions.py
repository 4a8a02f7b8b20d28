"""Exception and warning classes used across the package."""


class GeometryError(ValueError):
    """Invalid geometric input (non-convex polygon, bad parameters, ...)."""


class Infeasible(GeometryError):
    """The halfspace intersection is empty or has empty interior."""


class UnboundedInradius(GeometryError):
    """The region contains balls of arbitrarily large radius."""


class DegenerateContact(GeometryError):
    """Fewer than two boundary points touch the claimed maximal ball."""


class EnvelopeFailure(GeometryError):
    """No subset of tangent halfplanes reproduces the inradius."""


class TangencyViolation(GeometryError):
    """A face misses the inscribed ball by more than the tolerance."""


class OutsideDomain(GeometryError):
    """A query point lies outside the polygon."""


class MeshFailure(RuntimeError):
    """Triangulation produced an invalid or low quality mesh."""


class InadmissibleExponent(ValueError):
    """Exponent pair outside the range where the quantity is meaningful."""


class Unsupported(InadmissibleExponent, NotImplementedError):
    """Admissible exponent that the discrete solver does not handle (q = inf)."""


class ZeroDenominator(ZeroDivisionError):
    """The Rayleigh quotient denominator vanishes for the given field."""


class ConvergenceWarning(UserWarning):
    """An iterative solve stopped without meeting its tolerance."""
