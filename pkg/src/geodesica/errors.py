"""Exception hierarchy shared across the toolkit.

Every named failure mode raises a distinct class so callers (and the
pipeline's report assembly) can branch on the type rather than parse
messages.
"""


class GeodesicaError(Exception):
    """Base class for all library errors."""


class ZeroModulus(GeodesicaError):
    """Polynomial reduction attempted with the zero modulus."""


class ZeroPolynomial(GeodesicaError):
    """Operation undefined for the zero polynomial."""


class RepeatedRoots(GeodesicaError):
    """Root finder requires a square-free input; caller must deflate."""


class DivisionByZero(GeodesicaError):
    """Field inverse of zero."""


class PrecisionExhausted(GeodesicaError):
    """Certified decision impossible within the configured precision cap."""


class BadFraction(GeodesicaError):
    """Invalid two-bridge fraction (p even, or gcd(p, q) != 1, or q out of range)."""


class NotTwoBridge(GeodesicaError):
    """Presentation does not have the two-bridge relator shape a w b^-1 w^-1."""


class NotARepresentation(GeodesicaError):
    """Generator images fail to satisfy the group relators."""


class IdentityFailed(GeodesicaError):
    """A pinned matrix identity failed; the offending word is in the message."""


class FactorIdentityFailed(GeodesicaError):
    """A pretzel entry/factorization identity failed."""


class NoLiftExists(GeodesicaError):
    """Relator defect system has no integer solution (signals bad input data)."""


class MilnorWoodViolated(GeodesicaError):
    """A computed Euler number exceeded 2g-1; signals a computation bug."""


class IncompleteCaseAnalysis(GeodesicaError):
    """Slope case descriptors missing for a knot; result would not be exhaustive."""


class UnsupportedCase(GeodesicaError):
    """Uniqueness-system expansion shape not supported."""


class DegenerateCline(GeodesicaError):
    """Three defining points do not determine a circle or line."""


class NotAGeodesicEndpoint(GeodesicaError):
    """Endpoint parameter has degree > 2 over Q."""


class BadCensus(GeodesicaError):
    """Census file violates the schema; message carries record name and field."""
