"""Calculus-independent bicategory checks.

An arrow calculus supplies objects, 1-cells, 2-cells, horizontal composition
(with whatever projection data its associators need), units, associators and
unitors.  This module evaluates the coherence laws on concrete cells, checks
sampled naturality, and certifies isomorphism of objects.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Protocol, Sequence

from .errors import NotComposable, ObjectMismatch


@dataclass(frozen=True)
class IsoSearch:
    """Outcome of looking for an invertible 2-cell between two parallel 1-cells.

    `proven` qualifies a negative answer: True when the search was exhaustive
    (or an invariant rules isomorphism out), False for a randomized miss.
    """

    cell: Any
    proven: bool
    method: str

    @property
    def found(self) -> bool:
        return self.cell is not None


class ArrowCalculus(Protocol):
    name: str

    def objects(self, cell) -> tuple[Any, Any]: ...
    def same_object(self, a, b) -> bool: ...
    def unit(self, obj): ...
    def compose(self, m, n): ...
    def identity(self, cell): ...
    def source(self, alpha): ...
    def target(self, alpha): ...
    def vcompose(self, beta, alpha): ...
    def hcompose(self, alpha, beta): ...
    def equal(self, alpha, beta) -> bool: ...
    def is_iso(self, alpha) -> bool: ...
    def associator(self, m, n, p): ...
    def left_unitor(self, m): ...
    def right_unitor(self, m): ...
    def find_iso(self, m, n) -> IsoSearch: ...
    def describe(self, cell) -> Any: ...


LAWS = ("pentagon", "triangle", "left-unit", "right-unit")


@dataclass
class CoherenceReport:
    law: str
    holds: bool
    witness: Any = None

    def __post_init__(self):
        if self.law not in LAWS and self.law not in ("associator-naturality",
                                                      "invertibility"):
            raise ValueError(f"unknown law {self.law!r}")
        if not self.holds and self.witness is None:
            raise ValueError("a failing report needs a witness")

    def to_dict(self) -> dict:
        out = {"law": self.law, "holds": self.holds}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _check_chain(calc: ArrowCalculus, cells: Sequence) -> None:
    for a, b in zip(cells, cells[1:]):
        if not calc.same_object(calc.objects(a)[1], calc.objects(b)[0]):
            raise NotComposable(
                f"{calc.describe(a)} and {calc.describe(b)} do not compose")


def composable(calc: ArrowCalculus, cells: Sequence) -> bool:
    return all(calc.same_object(calc.objects(a)[1], calc.objects(b)[0])
               for a, b in zip(cells, cells[1:]))


def _require_iso(calc, cell, what):
    if not calc.is_iso(cell):
        raise AssertionError(f"{what} is not invertible")
    return cell


def associator(calc: ArrowCalculus, m, n, p):
    """Invertible 2-cell (m.n).p -> m.(n.p)."""
    _check_chain(calc, (m, n, p))
    return _require_iso(calc, calc.associator(m, n, p), "associator")


def left_unitor(calc: ArrowCalculus, m):
    return _require_iso(calc, calc.left_unitor(m), "left unitor")


def right_unitor(calc: ArrowCalculus, m):
    return _require_iso(calc, calc.right_unitor(m), "right unitor")


def _report(calc, law, lhs, rhs, cells) -> CoherenceReport:
    if calc.equal(lhs, rhs):
        return CoherenceReport(law, True)
    return CoherenceReport(law, False, {"cells": [calc.describe(c) for c in cells]})


def check_pentagon(calc: ArrowCalculus, m, n, p, q) -> CoherenceReport:
    """Compare the two re-bracketings ((mn)p)q => m(n(pq))."""
    _check_chain(calc, (m, n, p, q))
    c = calc.compose
    mn, pq = c(m, n), c(p, q)
    np_ = c(n, p)
    # upper path: a_{m,n,pq} . a_{mn,p,q}
    upper = calc.vcompose(associator(calc, m, n, pq), associator(calc, mn, p, q))
    # lower path: (1_m * a_{n,p,q}) . a_{m,np,q} . (a_{m,n,p} * 1_q)
    lower = calc.vcompose(
        calc.hcompose(calc.identity(m), associator(calc, n, p, q)),
        calc.vcompose(associator(calc, m, np_, q),
                      calc.hcompose(associator(calc, m, n, p), calc.identity(q))))
    return _report(calc, "pentagon", upper, lower, (m, n, p, q))


def check_triangle(calc: ArrowCalculus, m, n) -> CoherenceReport:
    """(rho_m * 1_n) = (1_m * lambda_n) . a_{m,1,n} on (m1)n."""
    _check_chain(calc, (m, n))
    one = calc.unit(calc.objects(m)[1])
    lhs = calc.hcompose(right_unitor(calc, m), calc.identity(n))
    rhs = calc.vcompose(calc.hcompose(calc.identity(m), left_unitor(calc, n)),
                        associator(calc, m, one, n))
    return _report(calc, "triangle", lhs, rhs, (m, n))


def check_left_unit(calc: ArrowCalculus, m, n) -> CoherenceReport:
    """lambda_{mn} . a_{1,m,n} = lambda_m * 1_n on (1m)n."""
    _check_chain(calc, (m, n))
    one = calc.unit(calc.objects(m)[0])
    lhs = calc.vcompose(left_unitor(calc, calc.compose(m, n)),
                        associator(calc, one, m, n))
    rhs = calc.hcompose(left_unitor(calc, m), calc.identity(n))
    return _report(calc, "left-unit", lhs, rhs, (m, n))


def check_right_unit(calc: ArrowCalculus, m, n) -> CoherenceReport:
    """(1_m * rho_n) . a_{m,n,1} = rho_{mn} on (mn)1."""
    _check_chain(calc, (m, n))
    one = calc.unit(calc.objects(n)[1])
    lhs = calc.vcompose(calc.hcompose(calc.identity(m), right_unitor(calc, n)),
                        associator(calc, m, n, one))
    rhs = right_unitor(calc, calc.compose(m, n))
    return _report(calc, "right-unit", lhs, rhs, (m, n))


def check_associator_naturality(calc: ArrowCalculus, f, g, h) -> CoherenceReport:
    """For 2-cells f: m->m', g: n->n', h: p->p' the associator square commutes."""
    m, m2 = calc.source(f), calc.target(f)
    n, n2 = calc.source(g), calc.target(g)
    p, p2 = calc.source(h), calc.target(h)
    lhs = calc.vcompose(associator(calc, m2, n2, p2),
                        calc.hcompose(calc.hcompose(f, g), h))
    rhs = calc.vcompose(calc.hcompose(f, calc.hcompose(g, h)),
                        associator(calc, m, n, p))
    return _report(calc, "associator-naturality", lhs, rhs, (m, n, p))


def check_unitors_invertible(calc: ArrowCalculus, m) -> CoherenceReport:
    for what, cell in (("left", calc.left_unitor(m)), ("right", calc.right_unitor(m))):
        if not calc.is_iso(cell):
            return CoherenceReport("invertibility", False,
                                   {"unitor": what, "cell": calc.describe(m)})
    return CoherenceReport("invertibility", True)


@dataclass
class ObjectIsoResult:
    """Certificate (both 2-cells present) or refutation naming the failing side."""

    certified: bool
    iso_fg: Any = None
    iso_gf: Any = None
    failed_side: str | None = None
    proven: bool = True
    details: dict = field(default_factory=dict)

    def swapped(self) -> ObjectIsoResult:
        side = {"fg": "gf", "gf": "fg"}.get(self.failed_side, self.failed_side)
        return ObjectIsoResult(self.certified, self.iso_gf, self.iso_fg, side,
                               self.proven, dict(self.details))

    def to_dict(self) -> dict:
        out = {"certified": self.certified}
        if not self.certified:
            out["failed_side"] = self.failed_side
            out["refutation"] = "proven" if self.proven else "high-confidence"
        out.update(self.details)
        return out


def verify_object_isomorphism(calc: ArrowCalculus, f, g) -> ObjectIsoResult:
    """Certify a ~= b from f in (a,b), g in (b,a): fg ~= 1_a and gf ~= 1_b."""
    a, b = calc.objects(f)
    b2, a2 = calc.objects(g)
    if not (calc.same_object(a, a2) and calc.same_object(b, b2)):
        raise ObjectMismatch("f and g are not opposite-oriented between the same objects")
    first = calc.find_iso(calc.compose(f, g), calc.unit(a))
    details = {"fg": first.method}
    if not first.found:
        return ObjectIsoResult(False, failed_side="fg", proven=first.proven,
                               details=details)
    second = calc.find_iso(calc.compose(g, f), calc.unit(b))
    details["gf"] = second.method
    if not second.found:
        return ObjectIsoResult(False, iso_fg=first.cell, failed_side="gf",
                               proven=second.proven, details=details)
    return ObjectIsoResult(True, first.cell, second.cell, details=details)
