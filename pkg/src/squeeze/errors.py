"""Exception hierarchy shared by all modules."""


class SqueezeError(Exception):
    """Base class for all library errors."""


class ValidationError(SqueezeError, ValueError):
    """Malformed input: bad parameters, inconsistent profiles, points outside domains."""


class CertificationError(SqueezeError, RuntimeError):
    """A certified inequality could not be established at the requested resolution.

    Raising this is the honest outcome: the caller may refine grids or
    parameters, but the library never silently weakens a certificate.
    """


class NumericalError(SqueezeError, RuntimeError):
    """Internal numerical failure (root finding, optimizer breakdown)."""
