"""Exception types raised by vgpricer operations.

Two families: validation errors (bad inputs, caller's fault) and numerical
errors (a computation could not be completed to contract). The CLI maps
them to exit codes 2 and 3 respectively.
"""


class VGError(Exception):
    """Base class for all vgpricer errors."""


class ValidationError(VGError, ValueError):
    """Input violates a documented precondition."""


class NumericalError(VGError, ArithmeticError):
    """A numerical contract could not be met for otherwise valid inputs."""


class OutOfStrip(ValidationError):
    """Moment-generating-function argument outside the finite strip (h1, h2)."""


class OutOfDomain(ValidationError):
    """Esscher ratio argument outside (h1, h2 - 1)."""


class NotSolvable(ValidationError):
    """No Esscher parameter exists: the strip is narrower than 1."""


class StripError(ValidationError):
    """Complex frequency outside the analyticity strip of the transform."""


class DomainError(ValidationError):
    """Argument outside the mathematical domain of the function."""


class HorizonError(ValidationError):
    """Non-positive time horizon."""


class GridError(ValidationError):
    """Evaluation grid is not the uniform ascending lattice required."""


class LengthError(ValidationError):
    """Sequence length is not the required power of two."""


class FracRange(ValidationError):
    """Fractional-transform parameter outside (-1, 1)."""


class BracketError(ValidationError):
    """Degenerate or inverted search bracket."""


class NoBracket(ValidationError):
    """Root target lies outside the function range on the bracket."""


class NonFiniteSample(NumericalError):
    """Integrand returned NaN or infinity at a quadrature node."""


class TailError(NumericalError):
    """Truncation tail bound could not be met on the largest allowed grid."""


class BranchFailure(NumericalError):
    """Complex logarithm argument crossed the branch cut on the contour."""
