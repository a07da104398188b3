"""Exception hierarchy shared by every eqloc module."""


class EqlocError(Exception):
    """Base class for all eqloc errors."""


class RankMismatch(EqlocError, ValueError):
    def __init__(self, left, right):
        super().__init__(f"rank mismatch: {left} != {right}")
        self.left = left
        self.right = right


class DenominatorVanishes(EqlocError, ZeroDivisionError):
    """A denominator factor evaluates to zero at the requested point."""

    def __init__(self, factor, point):
        super().__init__(f"denominator factor ({factor}) vanishes at {tuple(str(x) for x in point)}")
        self.factor = factor
        self.point = point


class ModelError(EqlocError, ValueError):
    """A torus model violates one of its structural invariants."""

    def __init__(self, message, component=None):
        if component is not None:
            message = f"component {component!r}: {message}"
        super().__init__(message)
        self.component = component


class ModelParseError(EqlocError, ValueError):
    """Malformed model or class file; ``where`` names the line or field."""

    def __init__(self, message, where=None):
        if where is not None:
            message = f"{where}: {message}"
        super().__init__(message)
        self.where = where


class WeightCollapsesToZero(ModelError):
    def __init__(self, component, index):
        super().__init__(
            f"weight #{index} restricts to zero; the subtorus fixes a larger set "
            "and component-level data must be supplied",
            component,
        )
        self.index = index


class UnsupportedComponentProduct(ModelError):
    def __init__(self, left, right):
        super().__init__(
            f"cannot multiply positive-dimensional components {left!r} and {right!r}"
        )
        self.left = left
        self.right = right


class NonPolynomialResult(EqlocError, ArithmeticError):
    """The fixed-point contributions do not sum to a polynomial.

    This means the fixed-point data cannot be the restriction of a global
    equivariant class; ``remainder`` holds the uncancelled sum.
    """

    def __init__(self, remainder, contributions=()):
        super().__init__(f"fixed-point contributions do not cancel: {remainder}")
        self.remainder = remainder
        self.contributions = list(contributions)


class NonConstantVolume(EqlocError, ArithmeticError):
    def __init__(self, value):
        super().__init__(f"top-degree integral is not constant: {value}")
        self.value = value
