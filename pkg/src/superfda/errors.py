"""Exception types shared across the package."""


class AlgebraError(Exception):
    """Base class for all errors raised by the engine."""


class DegreeMismatch(AlgebraError):
    pass


class NotSquareZero(AlgebraError):
    def __init__(self, generator: str, value):
        self.generator = generator
        self.value = value
        super().__init__(f"d^2 {generator} = {value} is nonzero")


class TableMismatch(AlgebraError):
    pass


class NameCollision(AlgebraError):
    pass


class InvalidName(AlgebraError):
    pass


class ConstructionInvalid(AlgebraError):
    pass


class NoValidCandidate(AlgebraError):
    pass


class AmbiguousCandidate(AlgebraError):
    pass


class IndexOutOfRange(AlgebraError):
    pass


class DimensionMismatch(AlgebraError):
    pass


class NotClosed(AlgebraError):
    pass


class IllegalShift(AlgebraError):
    pass


class CurvedInput(AlgebraError):
    pass


class NotAnExtension(AlgebraError):
    pass


class SliceConditionViolated(AlgebraError):
    pass


class NoCalibration(AlgebraError):
    pass


class WindowMismatch(AlgebraError):
    pass


class DegreeCapExceeded(AlgebraError):
    pass


class NoDerivationConstant(AlgebraError):
    pass


class UnknownName(AlgebraError):
    pass


class CapTooSmall(UserWarning):
    """Advisory: the capped monomial basis cannot be complete for the bidegree."""
