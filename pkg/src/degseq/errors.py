"""Exception hierarchy shared by every module."""


class DegseqError(ValueError):
    """Base class for all library errors."""

    exit_code = 4


class EmptySequence(DegseqError):
    pass


class NonPositiveDegree(DegseqError):
    pass


class OddTotalDegree(DegseqError):
    pass


class InvalidSignature(DegseqError):
    pass


class SwitchMismatch(DegseqError):
    pass


class InvalidFamilyParams(DegseqError):
    pass


class OracleTooLarge(DegseqError):
    exit_code = 3


class HypothesisViolation(DegseqError):
    """A theorem hypothesis failed; ``failed`` names the inequalities."""

    exit_code = 2

    def __init__(self, message, failed=()):
        super().__init__(message)
        self.failed = tuple(failed)
