"""Finite-support monad values and Eilenberg-Moore algebras on truth values.

Four monads are supported:

``POW``
    finite powerset, union as multiplication;
``NEPOW``
    nonempty finite powerset;
``DIST``
    finitely supported probability distributions with exact rational weights;
``DISTBH``
    distributions with an absorbing black hole ``STAR``: any positive mass
    on ``STAR`` collapses the whole value to the pure ``STAR`` value.

All values are immutable and hashable, so they can serve as states of a
determinized machine.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import chain, combinations, product
from typing import Any, Callable, Hashable, Iterable, Mapping

from .quantale import BOOL, UNIT, Quantale, dyadic_grid
from .reports import CheckReport, DomainError
from .vcat import FinVCat


class _Star:
    """The adjoined black-hole outcome; not an element of any carrier."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "*"

    def __reduce__(self):
        return (_Star, ())


class _Stuck:
    """Truth value of a run that fell into the black hole."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "stuck"

    def __reduce__(self):
        return (_Stuck, ())


STAR = _Star()
STUCK = _Stuck()


class MonadKind(enum.Enum):
    POW = "pow"
    NEPOW = "nepow"
    DIST = "dist"
    DISTBH = "dist-bh"

    # identity hashing keeps monad values cheap to hash
    __hash__ = object.__hash__

    @property
    def is_affine(self) -> bool:
        return self.value in ("nepow", "dist")

    @property
    def is_distribution(self) -> bool:
        return self.value in ("dist", "dist-bh")


POW, NEPOW, DIST, DISTBH = MonadKind.POW, MonadKind.NEPOW, MonadKind.DIST, MonadKind.DISTBH


def _sort_key(x):
    return repr(x)


@dataclass(frozen=True)
class MonadValue:
    """A value of ``T X``.

    ``items`` holds the elements (set kinds) or ``(element, weight)`` pairs
    (distribution kinds).  Use the constructors below rather than building
    instances directly; they enforce the shape invariants.
    """

    kind: MonadKind
    items: frozenset

    def support(self) -> list:
        if self.kind.is_distribution:
            return sorted((x for x, _ in self.items), key=_sort_key)
        return sorted(self.items, key=_sort_key)

    def weights(self) -> dict:
        if not self.kind.is_distribution:
            raise DomainError(f"{self.kind.value} values carry no weights")
        return dict(self.items)

    def weight(self, x) -> Fraction:
        return self.weights().get(x, Fraction(0))

    @property
    def is_star(self) -> bool:
        return self.kind is DISTBH and any(x is STAR for x, _ in self.items)

    @property
    def is_empty(self) -> bool:
        return not self.items

    def __iter__(self):
        return iter(self.support())

    def __repr__(self) -> str:
        if self.kind.is_distribution:
            w = self.weights()
            body = ", ".join(f"{x!r}: {w[x]}" for x in self.support())
            return f"{self.kind.value}{{{body}}}"
        return f"{self.kind.value}{{{', '.join(repr(x) for x in self.support())}}}"


def _check_element(x) -> None:
    if x is STAR:
        raise DomainError("the black hole * is adjoined, not a carrier element")


def powerset(elements: Iterable[Hashable]) -> MonadValue:
    elements = frozenset(elements)
    for x in elements:
        _check_element(x)
    return MonadValue(POW, elements)


def nonempty(elements: Iterable[Hashable]) -> MonadValue:
    elements = frozenset(elements)
    if not elements:
        raise DomainError("nonempty powerset value must have an element")
    for x in elements:
        _check_element(x)
    return MonadValue(NEPOW, elements)


def _weights(mapping: Mapping | Iterable) -> dict:
    pairs = mapping.items() if isinstance(mapping, Mapping) else mapping
    out: dict = {}
    for x, w in pairs:
        w = Fraction(w)
        if w < 0:
            raise DomainError(f"negative weight {w} on {x!r}")
        if w:
            out[x] = out.get(x, Fraction(0)) + w
    total = sum(out.values(), Fraction(0))
    if total != 1:
        raise DomainError(f"weights sum to {total}, expected 1")
    return out


def dist(mapping: Mapping | Iterable) -> MonadValue:
    weights = _weights(mapping)
    for x in weights:
        _check_element(x)
    return MonadValue(DIST, frozenset(weights.items()))


def bh_flatten(mapping: Mapping | Iterable) -> MonadValue:
    """Normalize a distribution over ``X + {STAR}`` to a black-hole value."""
    weights = _weights(mapping)
    if weights.get(STAR, 0) > 0:
        return MonadValue(DISTBH, frozenset({(STAR, Fraction(1))}))
    return MonadValue(DISTBH, frozenset(weights.items()))


dist_bh = bh_flatten

STAR_VALUE = MonadValue(DISTBH, frozenset({(STAR, Fraction(1))}))


def make(kind: MonadKind, payload) -> MonadValue:
    """Build a value of ``kind`` from a set (set kinds) or mapping (distributions)."""
    return {POW: powerset, NEPOW: nonempty, DIST: dist, DISTBH: bh_flatten}[kind](payload)


def unit(kind: MonadKind, x) -> MonadValue:
    _check_element(x)
    if kind.is_distribution:
        return MonadValue(kind, frozenset({(x, Fraction(1))}))
    return MonadValue(kind, frozenset({x}))


def fmap(kind: MonadKind, f: Callable, t: MonadValue) -> MonadValue:
    if t.kind is not kind:
        raise DomainError(f"expected a {kind.value} value, got {t.kind.value}")
    if not kind.is_distribution:
        return MonadValue(kind, frozenset(f(x) for x in t.items))
    if t.is_star:
        return t
    acc: dict = {}
    for x, w in t.items:
        y = f(x)
        _check_element(y)
        acc[y] = acc.get(y, Fraction(0)) + w
    return MonadValue(kind, frozenset(acc.items()))


def mult(kind: MonadKind, tt: MonadValue) -> MonadValue:
    if tt.kind is not kind:
        raise DomainError(f"expected a {kind.value} value, got {tt.kind.value}")
    if not kind.is_distribution:
        inner = list(tt.items)
        for t in inner:
            if not isinstance(t, MonadValue) or t.kind is not kind:
                raise DomainError("mixed monad kinds in multiplication")
        return MonadValue(kind, frozenset(chain.from_iterable(t.items for t in inner)))
    if tt.is_star:
        return tt
    acc: dict = {}
    for t, w in tt.items:
        if not isinstance(t, MonadValue) or t.kind is not kind:
            raise DomainError("mixed monad kinds in multiplication")
        for x, v in t.items:
            acc[x] = acc.get(x, Fraction(0)) + w * v
    if kind is DISTBH:
        return bh_flatten(acc)
    return MonadValue(kind, frozenset(acc.items()))


def terminal_image(t: MonadValue) -> bool:
    """``T!`` into ``T1``; ``True`` encodes the unit element ``eta(*)``.

    For affine kinds this is always ``True``.  For ``POW`` it is the
    nonemptiness bit and for ``DISTBH`` it is "not swallowed by the black hole".
    """
    if t.kind is POW:
        return not t.is_empty
    if t.kind is DISTBH:
        return not t.is_star
    return True


def t1_value(kind: MonadKind, executable: bool) -> MonadValue:
    """Inverse of :func:`terminal_image` on ``T1`` with ``1 = {()}``."""
    if executable:
        return unit(kind, ())
    if kind is POW:
        return powerset(())
    if kind is DISTBH:
        return STAR_VALUE
    raise DomainError(f"{kind.value} is affine; T1 has a single element")


# --------------------------------------------------------------------------
# Eilenberg-Moore algebras on the truth-value object


@dataclass(frozen=True)
class AlgebraStructure:
    """A ``T``-algebra ``o: T(Omega) -> Omega`` on a truth-value object.

    ``distance`` is the V-valued distance on the carrier.
    """

    name: str
    kind: MonadKind
    quantale: Quantale
    contains: Callable[[Any], bool]
    evaluate: Callable[[MonadValue], Any]
    distance: Callable[[Any, Any], Any]
    grid: tuple

    def __call__(self, t: MonadValue):
        return self.evaluate(t)

    def format(self, v) -> str:
        if v is STUCK:
            return "stuck"
        return self.quantale.format(v) if isinstance(v, bool) else str(v)


def _join(t: MonadValue) -> bool:
    return True in t.items


def _expect(t: MonadValue) -> Fraction:
    return sum((Fraction(v) * w for v, w in t.items), Fraction(0))


def _expect_bh(t: MonadValue):
    if t.is_star or any(v is STUCK for v, _ in t.items):
        return STUCK
    return _expect(t)


def _bh_distance(u, v):
    if u is STUCK or v is STUCK:
        return UNIT.unit if u is v else UNIT.bottom
    return UNIT.sym_dist(u, v)


def _is_bool(v) -> bool:
    return isinstance(v, bool)


def _is_unit(v) -> bool:
    return UNIT.contains(v)


def o_join(kind: MonadKind = NEPOW) -> AlgebraStructure:
    """Join algebra on 2 for the (nonempty) powerset monad: true iff some member is."""
    if kind not in (POW, NEPOW):
        raise DomainError("o_join is an algebra for pow / nepow only")
    return AlgebraStructure(f"o_join[{kind.value}]", kind, BOOL, _is_bool, _join,
                            BOOL.sym_dist, (False, True))


def o_expect() -> AlgebraStructure:
    """Expected value on ``[0,1]`` for the distribution monad."""
    return AlgebraStructure("o_expect", DIST, UNIT, _is_unit, _expect, UNIT.sym_dist,
                            tuple(dyadic_grid(4)))


def o_expect_bh() -> AlgebraStructure:
    """Expected value on ``[0,1] + {STUCK}``; ``STUCK`` absorbs any positive mass."""
    return AlgebraStructure("o_expect_bh", DISTBH, UNIT,
                            lambda v: v is STUCK or _is_unit(v), _expect_bh, _bh_distance,
                            tuple(dyadic_grid(4)) + (STUCK,))


# --------------------------------------------------------------------------
# Kantorovich lifting


def kantorovich(d: FinVCat, mu: MonadValue, nu: MonadValue) -> Fraction:
    """Exact Kantorovich distance of two distributions over a ``UNIT`` space.

    Solved as a transportation problem by successive shortest augmenting
    paths with exact rational flows.
    """
    if d.quantale is not UNIT:
        raise DomainError("kantorovich needs a ground space over the unit quantale")
    for x in d.points:
        for y in d.points:
            if d.d(x, y) != d.d(y, x):
                raise DomainError(f"ground distance is asymmetric at ({x!r}, {y!r})")
    if mu.kind is not DIST or nu.kind is not DIST:
        raise DomainError("kantorovich is defined on plain distributions")
    src, dst = mu.support(), nu.support()
    for x in src + dst:
        if x not in d:
            raise DomainError(f"{x!r} not in the ground space")
    supply = [mu.weight(x) for x in src]
    demand = [nu.weight(y) for y in dst]
    cost = [[Fraction(d.d(x, y)) for y in dst] for x in src]
    flow = [[Fraction(0)] * len(dst) for _ in src]
    return _min_cost_transport(supply, demand, cost, flow)


def _min_cost_transport(supply, demand, cost, flow) -> Fraction:
    m, n = len(supply), len(demand)
    supply, demand = list(supply), list(demand)
    source = -1
    while any(s > 0 for s in supply):
        # Bellman-Ford over the residual network; sources are 0..m-1, sinks m..m+n-1
        dist: list = [None] * (m + n)
        prev: list = [None] * (m + n)
        for i in range(m):
            if supply[i] > 0:
                dist[i], prev[i] = Fraction(0), source
        for _ in range(m + n):
            changed = False
            for i in range(m):
                for j in range(n):
                    if dist[i] is not None:
                        nd = dist[i] + cost[i][j]
                        if dist[m + j] is None or nd < dist[m + j]:
                            dist[m + j], prev[m + j] = nd, i
                            changed = True
                    if flow[i][j] > 0 and dist[m + j] is not None:
                        nd = dist[m + j] - cost[i][j]
                        if dist[i] is None or nd < dist[i]:
                            dist[i], prev[i] = nd, m + j
                            changed = True
            if not changed:
                break
        target = min((j for j in range(n) if demand[j] > 0 and dist[m + j] is not None),
                     key=lambda j: dist[m + j])
        path = [m + target]
        while prev[path[-1]] != source:
            path.append(prev[path[-1]])
        path.reverse()
        amount = min(supply[path[0]], demand[target])
        for a, b in zip(path, path[1:]):
            if a >= m:
                amount = min(amount, flow[b][a - m])
        for a, b in zip(path, path[1:]):
            if a < m:
                flow[a][b - m] += amount
            else:
                flow[b][a - m] -= amount
        supply[path[0]] -= amount
        demand[target] -= amount
    return sum((flow[i][j] * cost[i][j] for i in range(m) for j in range(n)), Fraction(0))


# --------------------------------------------------------------------------
# Finite test values and law checks


def compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def dist_grid(carrier, max_support: int = 3, denominator: int = 4) -> list[dict]:
    """All weight maps with support at most ``max_support`` and weights in ``1/denominator``."""
    carrier = list(carrier)
    out = []
    for k in range(1, min(max_support, len(carrier), denominator) + 1):
        for subset in combinations(carrier, k):
            for parts in compositions(denominator, k):
                out.append({x: Fraction(p, denominator) for x, p in zip(subset, parts)})
    return out


def value_count(kind: MonadKind, size: int) -> int | None:
    if kind is POW:
        return 2 ** size
    if kind is NEPOW:
        return 2 ** size - 1
    return None


def enumerate_values(kind: MonadKind, carrier, max_support: int = 3,
                     denominator: int = 4) -> list[MonadValue]:
    """All set values, or the dyadic grid of distribution values, over ``carrier``."""
    carrier = list(carrier)
    if kind is POW:
        return [powerset(s) for r in range(len(carrier) + 1) for s in combinations(carrier, r)]
    if kind is NEPOW:
        return [nonempty(s) for r in range(1, len(carrier) + 1) for s in combinations(carrier, r)]
    values = [make(kind, w) for w in dist_grid(carrier, max_support, denominator)]
    if kind is DISTBH:
        values.append(STAR_VALUE)
    return values


def random_value(kind: MonadKind, carrier, rng: random.Random, max_support: int = 3,
                 denominator: int = 4, star_probability: float = 0.15) -> MonadValue:
    carrier = list(dict.fromkeys(carrier))
    if kind is DISTBH and rng.random() < star_probability:
        return STAR_VALUE
    if kind is POW:
        k = rng.randint(0, min(max_support, len(carrier)))
        return powerset(rng.sample(carrier, k))
    k = rng.randint(1, min(max_support, len(carrier)))
    support = rng.sample(carrier, k)
    if kind is NEPOW:
        return nonempty(support)
    denominator = max(denominator, k)
    parts = rng.choice(list(compositions(denominator, k)))
    return make(kind, {x: Fraction(p, denominator) for x, p in zip(support, parts)})


def values_for(kind: MonadKind, carrier, rng: random.Random, limit: int = 4096,
               samples: int = 300) -> tuple[list[MonadValue], str]:
    """Exhaustive values when few enough, otherwise a seeded sample."""
    carrier = list(carrier)
    count = value_count(kind, len(carrier))
    if count is not None and count <= limit:
        return enumerate_values(kind, carrier), "exhaustive"
    if count is None and len(carrier) <= 4:
        return enumerate_values(kind, carrier), "grid"
    seen = {random_value(kind, carrier, rng) for _ in range(samples)}
    return sorted(seen, key=repr), "sampled"


def check_monad_laws(kind: MonadKind, carrier, seed: int = 0) -> CheckReport:
    rng = random.Random(seed)
    report = CheckReport("monad-laws", instance=f"{kind.value} on {len(list(carrier))} points")
    tx, mode1 = values_for(kind, carrier, rng)
    for t in tx:
        if mult(kind, unit(kind, t)) != t:
            report.fail("left-unit", t)
        if mult(kind, fmap(kind, lambda x: unit(kind, x), t)) != t:
            report.fail("right-unit", t)
    ttx, mode2 = values_for(kind, tx, rng, samples=150)
    tttx, mode3 = values_for(kind, ttx, rng, samples=150)
    for ttt in tttx:
        lhs = mult(kind, mult(kind, ttt))
        rhs = mult(kind, fmap(kind, lambda tt: mult(kind, tt), ttt))
        if lhs != rhs:
            report.fail("associativity", ttt)
    report.breakdown = {"TX": mode1, "TTX": mode2, "TTTX": mode3}
    return report


def check_algebra_laws(alg: AlgebraStructure, seed: int = 0) -> CheckReport:
    rng = random.Random(seed)
    kind = alg.kind
    report = CheckReport("algebra-laws", instance=alg.name)
    for v in alg.grid:
        if alg(unit(kind, v)) != v:
            report.fail("unit", v)
    tomega, _ = values_for(kind, alg.grid, rng)
    for t in tomega:
        if not alg.contains(alg(t)):
            report.fail("closure", t)
    ttomega, mode = values_for(kind, tomega, rng, samples=300)
    for tt in ttomega:
        if alg(mult(kind, tt)) != alg(fmap(kind, alg.evaluate, tt)):
            report.fail("multiplication", tt)
    report.breakdown = {"TTOmega": mode}
    return report


def check_monad_and_algebra_laws(kind: MonadKind, carriers: Iterable, algebras: Iterable,
                                 seed: int = 0) -> CheckReport:
    report = CheckReport("monad-and-algebra-laws", instance=kind.value)
    for carrier in carriers:
        report.add(check_monad_laws(kind, carrier, seed))
    for alg in algebras:
        if alg.kind is not kind:
            raise DomainError(f"{alg.name} is not an algebra for {kind.value}")
        report.add(check_algebra_laws(alg, seed))
    return report


def standard_algebra(kind: MonadKind) -> AlgebraStructure:
    return {POW: lambda: o_join(POW), NEPOW: lambda: o_join(NEPOW),
            DIST: o_expect, DISTBH: o_expect_bh}[kind]()

