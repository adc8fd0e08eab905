"""Exception hierarchy.

Everything raised on purpose by the library derives from :class:`TngError`,
so callers (and the CLI) can separate input problems from bugs.
"""


class TngError(Exception):
    pass


class InputError(TngError):
    """Bad input data (exit code 65 in the CLI)."""


class ParseError(InputError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnknownLetter(ParseError):
    pass


class EmptyGeneratorList(ParseError):
    pass


class EmptyRelator(ParseError):
    pass


class SizeExceeded(TngError):
    pass


class DegreeExceeded(TngError):
    pass


class BudgetExhausted(TngError):
    pass


class DeficiencyMismatch(InputError):
    pass


class ZeroClass(InputError):
    pass


class RankTooSmall(TngError):
    pass


class RankTooLarge(TngError):
    pass


class DenominatorVanishes(TngError):
    pass


class ZeroPolynomial(TngError):
    pass


class DimensionExceeded(TngError):
    pass


class SearchBudgetExceeded(TngError):
    pass


class IncompleteCones(TngError):
    def __init__(self, message, uncovered=()):
        super().__init__(message)
        self.uncovered = list(uncovered)


class MismatchedWitness(TngError):
    pass


class SchemaViolation(InputError):
    pass


class RegistryConflict(InputError):
    """A registry upper bound is smaller than a proven lower bound."""


class UnsupportedFormat(TngError):
    pass
