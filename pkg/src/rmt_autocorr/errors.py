"""Typed errors raised by the numerical routes.

Every route that can fail for a *numerical* reason (as opposed to a usage
error) raises one of these, so callers can fall back to a confluent-safe
route or report a machine-readable error name.
"""


class RouteError(Exception):
    """Base class for numerical-route failures."""


class NearConfluent(RouteError):
    """Evaluation points too close together for a Vandermonde-normalized
    route; use a confluent-safe route (Jacobi-Trudi Schur) instead."""


class PoleHit(RouteError):
    """A closed-form denominator is (numerically) zero for these shifts."""


class DimensionCap(RouteError):
    """A tensor-product grid would exceed the configured dimension cap."""


class ContourTooTight(RouteError):
    """The automatic contour radius cannot separate the enclosed points
    from the integrand's other singularities."""


class InconsistentCoefficients(RouteError):
    """Polynomial coefficients do not satisfy the required divisibility
    relation."""
