"""Exception hierarchy shared by every module of the package."""


class SuperAlgebraError(Exception):
    """Base class for all errors raised by superbracket."""


class TableMismatchError(SuperAlgebraError, ValueError):
    """Operands live over different variable tables."""


class UnknownVariableError(SuperAlgebraError, KeyError):
    def __str__(self):
        return f"unknown variable {self.args[0]!r}"


class NonhomogeneousError(SuperAlgebraError, ValueError):
    """An operation that needs a definite parity got a mixed-parity element."""


class DiracError(SuperAlgebraError):
    """Base class for constraint-matrix failures."""


class OddEntryError(DiracError):
    """A constraint-matrix entry has odd parity and cannot be inverted."""

    def __init__(self, row, col):
        super().__init__(f"constraint matrix entry ({row}, {col}) has odd parity")
        self.row = row
        self.col = col


class SingularBodyError(DiracError):
    """The scalar part of the constraint matrix is not invertible."""


class NonScalarBodyError(DiracError):
    """An entry carries a purely even, non-constant term, so it is not body + nilpotent soul."""

    def __init__(self, row, col):
        super().__init__(
            f"constraint matrix entry ({row}, {col}) has a non-nilpotent non-constant part"
        )
        self.row = row
        self.col = col


class InvalidConstraintError(DiracError, ValueError):
    """A constraint is zero or has mixed parity."""


class UnsolvableConstraintError(DiracError):
    """No variable of the constraint can be solved for by substitution."""


class SeriesOrderMismatchError(SuperAlgebraError, ValueError):
    """Two formal series with different truncation orders were combined."""


class ParseError(SuperAlgebraError):
    """Base class for positioned parse failures."""

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class IllegalCharacterError(ParseError):
    pass


class ExprSyntaxError(ParseError):
    pass


class UnknownIdentifierError(ParseError):
    pass


class NonNaturalExponentError(ParseError):
    pass


class SessionError(SuperAlgebraError, ValueError):
    """Malformed session declaration."""


class RetryExhaustedError(SuperAlgebraError):
    """Random generation could not satisfy the requested constraints."""
