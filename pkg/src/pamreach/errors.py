"""Exception hierarchy shared by every module.

All errors derive from :class:`PamError` (itself a ``ValueError``) so callers
can catch the whole family at once; the CLI maps them to a single exit code.
"""


class PamError(ValueError):
    pass


# exact numbers
class ZeroHasNoWeight(PamError):
    pass


class EnumerationTooLarge(PamError):
    pass


class UnfactorableCoefficient(PamError):
    pass


# maps and orbits
class PointOutsideDomain(PamError):
    pass


class PointInCoverageGap(PamError):
    pass


class NotDeterministic(PamError):
    pass


class SlopeZero(PamError):
    pass


# deciders
class SignConditionViolated(PamError):
    pass


class NotInjective(PamError):
    pass


class NotTwoPieces(PamError):
    pass


class BadDensityBounds(PamError):
    pass


# beta expansions
class IntegerBase(PamError):
    pass


class BaseNotGreaterThanOne(PamError):
    pass


class BaseOutOfRange(PamError):
    pass


# sequences
class PrecisionOverflow(PamError):
    pass


class RangeExceedsDelta(PamError):
    pass


class CapExceededError(PamError):
    pass


# file formats
class PamSyntaxError(PamError):
    pass


class ValidationFailed(PamError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)
