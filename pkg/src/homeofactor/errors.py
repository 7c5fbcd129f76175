"""Exception hierarchy shared by all modules."""


class HomeoError(Exception):
    """Base class for all library errors."""


class InvariantViolation(HomeoError):
    """A value failed a structural invariant (non-monotone knots, bad cover, ...)."""


class DomainError(HomeoError):
    """Evaluation point outside the map's domain."""


class DomainMismatch(HomeoError):
    """Operands live on different manifolds (interval vs circle)."""


class DepthExceeded(HomeoError):
    """Self-similar descent did not resolve within the depth bound."""


class NoOverlap(HomeoError):
    """A cover admits no valid cut-point schedule."""


class NotFragmentable(HomeoError):
    """The map is too far from the identity for the cover's threshold."""


class SupportTooLarge(HomeoError):
    """A support is not compactly contained in the prescribed ball."""


class BallsNotDisjoint(HomeoError):
    """The prescribed balls overlap."""


class PreconditionViolated(HomeoError):
    """An operation's stated precondition failed (reported, not silently False)."""


class ResolutionTooCoarse(HomeoError):
    """The sampled space is too coarse for the requested net radius."""


class NotAContraction(HomeoError):
    """The germ is not a local contraction."""


class NotBasisContracting(HomeoError):
    """The germ does not contract the dyadic basis of balls."""


class CoresTooLarge(HomeoError):
    """No compression map with the required displacement exists."""


class MalformedCertificate(HomeoError):
    """A certificate file or object is structurally invalid."""


class ParseError(HomeoError):
    """A value file could not be parsed."""
