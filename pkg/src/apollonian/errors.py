"""Exception hierarchy shared by the library and the command line."""


class ApollonianError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class UsageError(ApollonianError, ValueError):
    """Bad argument: out-of-range index, malformed quadruple, violated precondition."""


class InvalidPackingError(UsageError):
    """The quadruple does not describe a supported primitive bounded packing."""


class NotDescartesError(InvalidPackingError):
    pass


class ImprimitiveError(InvalidPackingError):
    pass


class ParityError(InvalidPackingError):
    pass


class UnboundedPackingError(InvalidPackingError):
    pass


class NotRootError(InvalidPackingError):
    pass


class CapacityError(ApollonianError):
    """Request exceeds a configured memory or state-space budget."""

    exit_code = 2


class CurvatureOverflowError(ApollonianError, ArithmeticError):
    """An intermediate value would not fit in a signed 64-bit integer."""

    exit_code = 2


class TraversalInvariantError(ApollonianError, AssertionError):
    """The quadruple tree violated an invariant that must hold for valid input."""

    exit_code = 2
