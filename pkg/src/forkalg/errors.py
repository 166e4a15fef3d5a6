"""Exception types raised across the package."""

from __future__ import annotations


class ForkAlgError(Exception):
    """Base class for all domain errors."""


class NotQuasiorder(ForkAlgError):
    pass


class NotForkFrame(ForkAlgError):
    pass


class NotForkAlgebra(ForkAlgError):
    pass


class NotClosed(ForkAlgError):
    pass


class ZeroBound(ForkAlgError):
    pass


class NotHomomorphism(ForkAlgError):
    pass


class TrivialAlgebra(ForkAlgError):
    pass


class NotIndecomposable(ForkAlgError):
    pass


class WrongVariety(ForkAlgError):
    pass


class NotGenerated(ForkAlgError):
    pass


class NotProjectiveSubalgebra(ForkAlgError):
    pass


class NotUnifiable(ForkAlgError):
    pass


class UnboundVariable(ForkAlgError):
    pass


class SearchBudgetExceeded(ForkAlgError):
    pass


class CapExceeded(ForkAlgError):
    pass


class ProofGap(ForkAlgError):
    """A step of the retraction construction met a situation it cannot handle."""


class ConsistencyError(ForkAlgError):
    """Two independent routes to the same answer disagreed."""


class ParseError(ForkAlgError):
    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{where}{message}")
