"""Exception hierarchy shared by every engine in the package."""


class GroverError(ValueError):
    """Base class for invalid inputs and failed numerical contracts."""


class EmptyMarkedSet(GroverError):
    pass


class AllMarked(GroverError):
    pass


class IndexOutOfRange(GroverError):
    pass


class DuplicateMarked(GroverError):
    pass


class NotNormalized(GroverError):
    pass


class NegativeDiscriminant(GroverError):
    pass


class QuadrantViolation(GroverError):
    pass


class InconsistentSplit(GroverError):
    pass


class StepTooLarge(GroverError):
    pass


class DomainEscape(GroverError):
    pass


class CapExceeded(GroverError):
    pass


class SubsetTooLarge(GroverError):
    pass


class DimMismatch(GroverError):
    pass


class ConvergenceFailure(ArithmeticError):
    pass
