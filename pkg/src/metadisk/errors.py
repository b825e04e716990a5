"""Exception types shared across the package."""


class MetadiskError(Exception):
    """Base class for every failure raised by this package."""


class StencilOutsideDisk(MetadiskError):
    """A finite-difference stencil would leave the open unit disk."""


class NonFinite(MetadiskError):
    """A sampled value came back inf or NaN."""


class NonConvergent(MetadiskError):
    """Two quadrature refinement levels disagree beyond the requested tolerance."""


class Divergent(MetadiskError):
    """A radial pairing sequence grows without the extrapolant stabilizing."""


class FitResidualTooLarge(MetadiskError):
    """A collocation fit failed to reproduce the sampled operator values."""


class ProductNotIdentity(MetadiskError):
    """A computed inverse failed its verification product."""


class IllConditioned(MetadiskError):
    """A least-squares system is too close to rank deficient to trust."""


class PairingMismatch(MetadiskError):
    """Algebraic and limit-based boundary pairings disagree."""


class SimilarityNotRealAtZero(MetadiskError):
    """The similarity exponent has a nonzero imaginary part at the origin."""
