"""Exception hierarchy shared by all heisenlab modules.

Every domain error derives from HeisenlabError so the CLI can map any of
them to a single exit code.  Errors that carry a counterexample expose it
as .witness (a tuple of offending elements or indices).
"""


class HeisenlabError(Exception):
    """Base class for all domain errors raised by this package."""

    def __init__(self, message="", witness=None):
        super().__init__(message)
        self.witness = witness

    @property
    def name(self):
        return type(self).__name__


# -- fields ----------------------------------------------------------------

class NotPrime(HeisenlabError):
    pass


class ReducibleModulus(HeisenlabError):
    pass


class UnsupportedSize(HeisenlabError):
    pass


class InfiniteField(HeisenlabError):
    pass


class CharacteristicMismatch(HeisenlabError):
    pass


class NotInjective(HeisenlabError):
    pass


class NotAHomomorphism(HeisenlabError):
    """A claimed field map fails one of the ring-hom checks."""


# -- groups ----------------------------------------------------------------

class FieldMismatch(HeisenlabError):
    pass


class TooLarge(HeisenlabError):
    pass


class NotACocycle(HeisenlabError):
    pass


class ShapeMismatch(HeisenlabError):
    pass


class InvalidParams(HeisenlabError):
    pass


class NotAdditive(HeisenlabError):
    pass


class NotPrimeField(HeisenlabError):
    pass


class InvalidHomomorphism(HeisenlabError):
    """A claimed group homomorphism table fails the pair check."""


# -- quadratic-additive extension -------------------------------------------

class Char2NonzeroCoeff(HeisenlabError):
    pass


class BadComplement(HeisenlabError):
    pass


# -- monomorphism decomposition ---------------------------------------------

class DegenerateD(HeisenlabError):
    pass


class ThetaNotHom(HeisenlabError):
    pass


class ProportionalityFailure(HeisenlabError):
    pass


class RecompositionMismatch(HeisenlabError):
    pass


class CenterNotPreserved(HeisenlabError):
    pass


# -- interpretation ----------------------------------------------------------

class NotCentral(HeisenlabError):
    pass


class InterpretationFailure(HeisenlabError):
    pass


# -- formula language --------------------------------------------------------

class FormulaSyntaxError(HeisenlabError):
    """Parse error with position and the tokens that would have been legal."""

    def __init__(self, message, line, col, expected=()):
        super().__init__(f"{message} at line {line}, column {col}")
        self.line = line
        self.col = col
        self.expected = frozenset(expected)


class UnboundVariable(HeisenlabError):
    pass


class BudgetExceeded(HeisenlabError):
    pass


# -- CLI ----------------------------------------------------------------------

class UsageError(HeisenlabError):
    pass
