"""Exception hierarchy.  Every axiom failure carries a concrete witness."""
from __future__ import annotations


class MoritaError(Exception):
    pass


class AxiomViolation(MoritaError):
    """A structure table fails one of its axioms; `witness` names the offending cells."""

    def __init__(self, axiom: str, witness, message: str | None = None):
        self.axiom = axiom
        self.witness = witness
        super().__init__(message or f"{axiom} violated at {witness!r}")


class AssociativityViolation(AxiomViolation):
    def __init__(self, i: int, j: int, k: int):
        super().__init__("associativity", (i, j, k))


class UnitViolation(AxiomViolation):
    def __init__(self, i: int):
        super().__init__("unit", (i,))


class NotAHomomorphism(AxiomViolation):
    def __init__(self, witness):
        super().__init__("homomorphism", witness)


class NotAFunctor(AxiomViolation):
    def __init__(self, witness):
        super().__init__("functor", witness)


class AlgebraMismatch(MoritaError):
    pass


class GroupoidMismatch(MoritaError):
    pass


class NotComposable(MoritaError):
    pass


class ObjectMismatch(MoritaError):
    pass


class DegenerateResult(MoritaError):
    pass


class NotRegular(MoritaError):
    pass


class NotCertified(MoritaError):
    pass


class CapExceeded(MoritaError):
    """An exhaustive search was asked to run beyond its configured cap."""


class ParseError(MoritaError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = f" (line {line}, col {col})" if line is not None else ""
        super().__init__(message + where)
