"""Exception types shared across the package.

Everything raised on purpose derives from BisimError so callers (and the
CLI exit-code mapping) can tell deliberate rejections apart from bugs.
"""


class BisimError(Exception):
    """Base class for all errors raised by dlbisim."""


class EmptyDomainError(BisimError):
    """An interpretation was given a domain of size zero."""


class UnknownNameError(BisimError):
    """A concept, role or individual name is not part of the signature."""


class ElementOutOfRangeError(BisimError):
    """An element id lies outside 0..n-1 for the stated domain size."""


class PartialIndividualMapError(BisimError):
    """Some individual name of the signature has no assigned element."""


class SignatureMismatchError(BisimError):
    """Two interpretations that must share a signature do not."""


class FeatureViolationError(BisimError):
    """An expression uses a constructor not licensed by the feature set."""

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class PartitionMismatchError(BisimError):
    """A partition does not fit the interpretation it is applied to."""


class NotSeparatedError(BisimError):
    """No separating concept exists: the two elements share a block."""


class TooLargeError(BisimError):
    """Input exceeds a guard bound of a deliberately naive routine."""


class DocumentError(BisimError):
    """A workspace document is structurally valid JSON but fails validation."""


class ParseError(BisimError):
    """Concept-grammar text could not be parsed."""

    def __init__(self, message, line=None, col=None):
        if line is not None:
            message = "%s (line %d, column %d)" % (message, line, col)
        super().__init__(message)
        self.line = line
        self.col = col
