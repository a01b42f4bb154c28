"""Commutative unital quantales used as truth values and distances.

Two instances ship: the Boolean quantale ``BOOL`` (conjunction as tensor)
and ``UNIT``, the unit interval with truncated addition and the reversed
order, so that ``0`` is the top element (distance zero) and ``1`` the
bottom (maximal distance).  Elements of ``UNIT`` are exact ``Fraction``
values.
"""

from __future__ import annotations

import re
from fractions import Fraction
from itertools import chain, combinations, product
from typing import Any, Iterable

from .reports import CheckReport, DomainError

_RATIONAL = re.compile(r"^\s*-?\d+\s*(/\s*\d+\s*)?$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``; decimal notation is rejected."""
    if isinstance(text, bool):
        raise DomainError(f"not a rational literal: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str) or not _RATIONAL.match(text):
        raise DomainError(f"not an exact rational literal (use 'p/q'): {text!r}")
    value = Fraction(text.replace(" ", ""))
    return value


class Quantale:
    """Interface of a commutative unital quantale on a represented carrier.

    Subclasses provide ``contains``, the constants ``unit``, ``bottom``,
    ``top`` and the primitive operations.  Joins and meets are finite.
    """

    name = "quantale"
    unit: Any
    bottom: Any
    top: Any

    def contains(self, a: Any) -> bool:
        raise NotImplementedError

    def check(self, *elements: Any) -> None:
        for a in elements:
            if not self.contains(a):
                raise DomainError(f"{a!r} is not an element of {self.name}")

    def tensor(self, a, b):
        raise NotImplementedError

    def leq(self, a, b) -> bool:
        raise NotImplementedError

    def join(self, elements: Iterable) -> Any:
        raise NotImplementedError

    def meet(self, elements: Iterable) -> Any:
        raise NotImplementedError

    def hom(self, b, c):
        raise NotImplementedError

    def sym_dist(self, a, b):
        """Symmetrized internal hom ``[a, b] meet [b, a]``."""
        return self.meet([self.hom(a, b), self.hom(b, a)])

    def format(self, a) -> str:
        return str(a)

    def parse(self, text) -> Any:
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.name


class Bool2(Quantale):
    name = "bool"
    unit = True
    bottom = False
    top = True

    def contains(self, a) -> bool:
        return isinstance(a, bool)

    def tensor(self, a, b):
        self.check(a, b)
        return a and b

    def leq(self, a, b) -> bool:
        self.check(a, b)
        return (not a) or b

    def join(self, elements):
        elements = list(elements)
        self.check(*elements)
        return any(elements)

    def meet(self, elements):
        elements = list(elements)
        self.check(*elements)
        return all(elements)

    def hom(self, b, c):
        self.check(b, c)
        return (not b) or c

    def format(self, a) -> str:
        return "T" if a else "F"

    def parse(self, text):
        if isinstance(text, bool):
            return text
        if text in ("T", "true", "1", 1):
            return True
        if text in ("F", "false", "0", 0):
            return False
        raise DomainError(f"not a Boolean literal: {text!r}")


class UnitIntervalOplus(Quantale):
    """``[0,1]`` with truncated addition, unit 0 and reversed order."""

    name = "unit"
    unit = Fraction(0)
    bottom = Fraction(1)
    top = Fraction(0)

    def contains(self, a) -> bool:
        return isinstance(a, (int, Fraction)) and not isinstance(a, bool) and 0 <= a <= 1

    def tensor(self, a, b):
        self.check(a, b)
        return Fraction(min(a + b, 1))

    def leq(self, a, b) -> bool:
        # V-order is the numeric order reversed
        self.check(a, b)
        return a >= b

    def join(self, elements):
        elements = list(elements)
        self.check(*elements)
        return Fraction(min(elements, default=1))

    def meet(self, elements):
        elements = list(elements)
        self.check(*elements)
        return Fraction(max(elements, default=0))

    def hom(self, b, c):
        self.check(b, c)
        return Fraction(max(c - b, 0))

    def parse(self, text):
        value = parse_rational(text)
        self.check(value)
        return value


BOOL = Bool2()
UNIT = UnitIntervalOplus()

QUANTALES = {"bool": BOOL, "unit": UNIT}


def tensor(q: Quantale, a, b):
    return q.tensor(a, b)


def hom(q: Quantale, b, c):
    return q.hom(b, c)


def sym_dist(q: Quantale, a, b):
    return q.sym_dist(a, b)


def dyadic_grid(denominator: int = 4) -> list[Fraction]:
    return [Fraction(i, denominator) for i in range(denominator + 1)]


def _subsets(sample):
    return chain.from_iterable(combinations(sample, r) for r in range(len(sample) + 1))


def check_quantale_laws(q: Quantale, sample: Iterable) -> CheckReport:
    """Exhaustively verify the quantale axioms over a finite sample.

    The sample should be closed enough for the lattice checks to be
    meaningful; joins and meets are compared against sample bounds only.
    """
    sample = list(sample)
    report = CheckReport("quantale-laws", instance=f"{q.name} on {len(sample)} elements")
    q.check(*sample)

    for a, b in product(sample, repeat=2):
        if q.tensor(a, b) != q.tensor(b, a):
            report.fail("commutativity", (a, b))
    for a in sample:
        if q.tensor(a, q.unit) != a:
            report.fail("unit", a)
    for a, b, c in product(sample, repeat=3):
        if q.tensor(q.tensor(a, b), c) != q.tensor(a, q.tensor(b, c)):
            report.fail("associativity", (a, b, c))

    for a in sample:
        if not q.leq(a, a):
            report.fail("order-reflexive", a)
        if not (q.leq(q.bottom, a) and q.leq(a, q.top)):
            report.fail("bounds", a)
    for a, b in product(sample, repeat=2):
        if a != b and q.leq(a, b) and q.leq(b, a):
            report.fail("order-antisymmetric", (a, b))
    for a, b, c in product(sample, repeat=3):
        if q.leq(a, b) and q.leq(b, c) and not q.leq(a, c):
            report.fail("order-transitive", (a, b, c))

    for family in _subsets(sample):
        j, m = q.join(family), q.meet(family)
        if not all(q.leq(u, j) for u in family):
            report.fail("join-upper-bound", family)
        if not all(q.leq(m, u) for u in family):
            report.fail("meet-lower-bound", family)
        for z in sample:
            if all(q.leq(u, z) for u in family) and not q.leq(j, z):
                report.fail("join-least", (family, z))
            if all(q.leq(z, u) for u in family) and not q.leq(z, m):
                report.fail("meet-greatest", (family, z))
        for v in sample:
            lhs = q.tensor(j, v)
            rhs = q.join([q.tensor(u, v) for u in family])
            if lhs != rhs:
                report.fail("join-continuity", (family, v))

    for a, b, c in product(sample, repeat=3):
        if q.leq(q.tensor(a, b), c) != q.leq(a, q.hom(b, c)):
            report.fail("adjunction", (a, b, c))
    return report
