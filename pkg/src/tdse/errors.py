"""Exception hierarchy shared across the package."""


class TdseError(Exception):
    pass


class ExprError(TdseError, ValueError):
    """Base for problems with coefficient expressions."""


class ParseError(ExprError):
    """Syntax error in an expression source.

    ``index`` is the 0-based character index of the offending token
    (``len(source)`` for an unexpected end of input); ``offset`` is the same
    position counted from 1, which is what the message reports.
    """

    def __init__(self, message: str, source: str, index: int):
        self.source = source
        self.index = index
        super().__init__(f"{message} at offset {self.offset}")

    @property
    def offset(self) -> int:
        return self.index + 1


class UnknownIdentifierError(ParseError):
    pass


class DomainError(ExprError, ArithmeticError):
    """Evaluation left the real domain of an expression."""


class NumericalFailure(TdseError):
    """A numerical invariant monitor tripped."""


class InvalidInitialData(NumericalFailure, ValueError):
    pass


class WronskianDrift(NumericalFailure):
    pass


class ImaginaryResidue(NumericalFailure):
    pass


class TruncationWarning(UserWarning):
    pass


class ConsistencyWarning(UserWarning):
    pass
