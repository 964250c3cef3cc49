"""Shared exception types."""


class PatchradError(Exception):
    """Base class for errors raised by this package."""


class SingularityError(PatchradError, ValueError):
    """Observation point coincides (numerically) with a source point."""


class ProximityError(PatchradError, ValueError):
    """Observation point violates the minimum-distance guard to the surface."""


class DegenerateCurrentError(PatchradError, ValueError):
    """Patch current block has no usable direction (real part vanishes)."""


class OracleConvergenceError(PatchradError, RuntimeError):
    """Reference-field quadrature failed to converge under refinement."""


class ZeroReferenceError(PatchradError, ValueError):
    """Relative error is undefined because the reference field is zero."""
