"""Finite V-categories (generalized pseudometric spaces) and initial sources."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Callable, Hashable, Iterable, Sequence

from .quantale import Quantale
from .reports import CheckReport, DomainError


@dataclass(frozen=True)
class FinVCat:
    """A finite carrier with a dense distance table valued in a quantale."""

    quantale: Quantale
    points: tuple
    table: dict = field(repr=False, compare=False)
    symmetric: bool = True
    separated: bool = False

    def __post_init__(self):
        if len(set(self.points)) != len(self.points):
            raise DomainError("duplicate points in carrier")

    @classmethod
    def from_function(cls, q: Quantale, points: Iterable[Hashable], d: Callable,
                      symmetric: bool = True, separated: bool = False) -> "FinVCat":
        points = tuple(points)
        table = {(x, y): d(x, y) for x in points for y in points}
        return cls(q, points, table, symmetric, separated)

    def d(self, x, y):
        try:
            return self.table[x, y]
        except KeyError:
            raise DomainError(f"({x!r}, {y!r}) not in carrier") from None

    def __contains__(self, x) -> bool:
        return x in set(self.points)

    def __len__(self) -> int:
        return len(self.points)


def make_discrete(q: Quantale, carrier: Iterable[Hashable]) -> FinVCat:
    points = tuple(carrier)
    if not points:
        raise DomainError("discrete V-category needs a nonempty carrier")
    return FinVCat.from_function(q, points, lambda x, y: q.unit if x == y else q.bottom,
                                 symmetric=True, separated=True)


def quantale_object(q: Quantale, points: Iterable) -> FinVCat:
    """Finite subspace of the quantale itself under the symmetrized hom."""
    return FinVCat.from_function(q, points, q.sym_dist, symmetric=True, separated=True)


def product_power(base: FinVCat, index: Sequence[Hashable]) -> FinVCat:
    """Categorical power ``base^index``; points are tuples ordered like ``index``.

    The distance is the componentwise meet, i.e. the sup-distance over ``UNIT``.
    """
    q = base.quantale
    index = tuple(index)
    points = tuple(product(base.points, repeat=len(index)))

    def dist(f, g):
        return q.meet(base.d(a, b) for a, b in zip(f, g))

    return FinVCat.from_function(q, points, dist, base.symmetric, base.separated)


class VFunctor:
    """A map between finite V-categories, checked nonexpansive on creation."""

    def __init__(self, dom: FinVCat, cod: FinVCat, fn: Callable, name: str = "f"):
        self.dom, self.cod, self.name = dom, cod, name
        self.values = {x: fn(x) for x in dom.points}
        q = dom.quantale
        for x, y in product(dom.points, repeat=2):
            fx, fy = self.values[x], self.values[y]
            if fx not in cod or fy not in cod:
                raise DomainError(f"{name}: image of {x!r} or {y!r} outside codomain")
            if not q.leq(dom.d(x, y), cod.d(fx, fy)):
                raise DomainError(f"{name} is not nonexpansive at ({x!r}, {y!r})")

    def __call__(self, x):
        return self.values[x]

    def __repr__(self) -> str:
        return f"VFunctor({self.name})"


def is_initial_source(dom: FinVCat, maps: Sequence[VFunctor]) -> tuple[bool, Any]:
    """Check ``d(x,y) == meet_i d_i(f_i x, f_i y)`` for all pairs.

    Returns ``(True, None)`` or ``(False, (x, y, lhs, rhs))``.
    """
    q = dom.quantale
    for f in maps:
        if f.dom is not dom and f.dom.points != dom.points:
            raise DomainError(f"{f.name} has a different domain")
    for x, y in product(dom.points, repeat=2):
        lhs = dom.d(x, y)
        rhs = q.meet(f.cod.d(f(x), f(y)) for f in maps)
        if lhs != rhs:
            return False, (x, y, lhs, rhs)
    return True, None


def compose(g: VFunctor, f: VFunctor) -> VFunctor:
    return VFunctor(f.dom, g.cod, lambda x: g(f(x)), name=f"{g.name}.{f.name}")


def projections(power: FinVCat, base: FinVCat, index: Sequence[Hashable]) -> list[VFunctor]:
    return [VFunctor(power, base, lambda f, i=i: f[i], name=f"pi_{label}")
            for i, label in enumerate(index)]


def check_vcat(v: FinVCat) -> CheckReport:
    q = v.quantale
    report = CheckReport("vcat-laws", instance=f"{len(v)} points over {q.name}")
    for x in v.points:
        if not q.leq(q.unit, v.d(x, x)):
            report.fail("reflexivity", x)
    for x, y, z in product(v.points, repeat=3):
        if not q.leq(q.tensor(v.d(x, y), v.d(y, z)), v.d(x, z)):
            report.fail("triangle", (x, y, z))
    if v.symmetric:
        for x, y in product(v.points, repeat=2):
            if v.d(x, y) != v.d(y, x):
                report.fail("symmetry", (x, y))
    if v.separated:
        for x, y in product(v.points, repeat=2):
            if x != y and q.leq(q.unit, v.d(x, y)):
                report.fail("separation", (x, y))
    return report
