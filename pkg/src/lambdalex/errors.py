"""Exception types shared across the package."""


class LambdaLexError(Exception):
    """Base class for all errors raised by this package."""


class TermSyntaxError(LambdaLexError):
    """Malformed term text.  Carries the character offset of the failure."""

    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = "%s (at position %d)" % (message, position)
        super().__init__(message)


class UnboundVariableError(LambdaLexError):
    """A lower-case identifier is neither bound nor a declared constant."""


class ReductionLimitError(LambdaLexError):
    """Beta-reduction did not terminate within the step bound."""


class NotApplicableError(LambdaLexError):
    """The functor of an application can never reduce (constant or atom)."""


class TypeConflictError(LambdaLexError):
    """Type inference failed.  ``subterm`` names the offending node."""

    def __init__(self, message, subterm=None):
        self.subterm = subterm
        if subterm is not None:
            message = "%s in %s" % (message, subterm)
        super().__init__(message)


class CategorySyntaxError(LambdaLexError):
    """Malformed CCG category text."""


class DerivationFormatError(LambdaLexError):
    """Malformed derivation s-expression, or spans that do not line up."""


class NoParseError(LambdaLexError):
    """The chart has no full-span item for the sentence."""


class CorpusFormatError(LambdaLexError):
    """A corpus block could not be read.  Carries the 1-based line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
