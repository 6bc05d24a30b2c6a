"""Exception hierarchy shared by every module."""


class StrengthLabError(Exception):
    """Base class for all library errors."""


class NotPrime(StrengthLabError, ValueError):
    pass


class DegreeZero(StrengthLabError, ValueError):
    pass


class FieldTooLarge(StrengthLabError, ValueError):
    pass


class DivisionByZero(StrengthLabError, ZeroDivisionError):
    pass


class FieldMismatch(StrengthLabError, ValueError):
    pass


class PolySyntaxError(StrengthLabError, ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class UnknownVariable(StrengthLabError, ValueError):
    pass


class DimensionMismatch(StrengthLabError, ValueError):
    pass


class ArityMismatch(StrengthLabError, ValueError):
    pass


class BudgetExceeded(StrengthLabError, RuntimeError):
    """The exact enumeration would exceed the configured evaluation budget."""


class ZeroSamples(StrengthLabError, ValueError):
    pass


class ZeroBias(StrengthLabError, ArithmeticError):
    pass


class BlockMismatch(StrengthLabError, ValueError):
    pass


class ConstantInSpan(StrengthLabError, ValueError):
    pass


class LinearlyDependent(StrengthLabError, ValueError):
    pass


class NonPrimeBase(StrengthLabError, ValueError):
    pass


class MoreEquationsThanVariables(StrengthLabError, ValueError):
    pass


class EmptyTable(StrengthLabError, ValueError):
    pass


class BadParameters(StrengthLabError, ValueError):
    pass


class DegreeTooLow(StrengthLabError, ValueError):
    pass


class NonpositiveConstant(StrengthLabError, ValueError):
    pass
