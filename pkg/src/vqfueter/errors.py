"""Exception types raised across the package."""


class VqError(Exception):
    """Base class for all errors raised by vqfueter."""


class ZeroDivisor(VqError, ZeroDivisionError):
    pass


class DomainError(VqError, ValueError):
    pass


class NotHermitian(VqError, ValueError):
    pass


class SingularVectorPart(VqError, ValueError):
    """The point has (numerically) zero vector part, i.e. lies outside H*."""


class DegreeCap(VqError, ValueError):
    pass


class DegreeMismatch(VqError, ValueError):
    pass


class BadBounds(VqError, ValueError):
    pass


class StencilOutOfDomain(VqError, ValueError):
    pass


class SegmentLeavesDomain(VqError, ValueError):
    pass


class ShapeMismatch(VqError, ValueError):
    pass


class SingularConstantTerm(VqError, ArithmeticError):
    pass


class SingularPencil(VqError, ArithmeticError):
    pass


class OutsideOmega1(VqError, ValueError):
    pass


class PointOutsideOmegaA(UserWarning):
    """Warning: a Gram point lies outside the Arveson ball |q| < 1."""
