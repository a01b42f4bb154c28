"""Graded n-step semantics for the graded monad ``M_n = F^n T``.

For ``F = A x (-)^Sigma`` an element of ``F^n T 1`` is a word table: an
``A``-value for every word shorter than ``n`` and a ``T1`` value for every
word of length exactly ``n``.  ``T1`` is trivial for affine monads, so the
frontier is only stored for ``pow`` and ``dist-bh``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Mapping

from . import monad as M
from .machine import Machine, Signature, det_step, zeta_apply
from .monad import MonadKind, MonadValue
from .quantale import Quantale
from .reports import CheckReport, DomainError


def words(alphabet: Iterable[str], length: int) -> list[str]:
    """Words of exactly ``length`` letters in lexicographic order of ``alphabet``."""
    return ["".join(w) for w in product(alphabet, repeat=length)]


def words_upto(alphabet: Iterable[str], length: int) -> list[str]:
    """Length-lexicographic words of length ``< length``."""
    alphabet = tuple(alphabet)
    return [w for k in range(length) for w in words(alphabet, k)]


@dataclass(frozen=True)
class WordTable:
    depth: int
    body: Mapping
    frontier: Mapping | None = None

    def __eq__(self, other):
        if not isinstance(other, WordTable):
            return NotImplemented
        return (self.depth == other.depth and dict(self.body) == dict(other.body)
                and (dict(self.frontier) if self.frontier is not None else None)
                == (dict(other.frontier) if other.frontier is not None else None))

    def __hash__(self):
        return hash((self.depth, frozenset(self.body.items()),
                     frozenset(self.frontier.items()) if self.frontier is not None else None))

    def subtable(self, letter: str) -> "WordTable":
        """The table below one letter, one level shallower."""
        if self.depth == 0:
            raise DomainError("a depth-0 table has no subtables")
        body = {w[1:]: v for w, v in self.body.items() if w[:1] == letter}
        frontier = None
        if self.frontier is not None:
            frontier = {w[1:]: v for w, v in self.frontier.items() if w[:1] == letter}
        return WordTable(self.depth - 1, body, frontier)

    def truncate(self, depth: int) -> "WordTable":
        """Truncation ``F^depth !``; only defined without a frontier."""
        if depth > self.depth:
            raise DomainError("cannot extend a table")
        if self.frontier is not None and depth != self.depth:
            raise DomainError("tables with a frontier have no canonical truncation")
        body = {w: v for w, v in self.body.items() if len(w) < depth}
        return WordTable(depth, body, self.frontier)

    def to_json(self) -> dict:
        def enc(v):
            if v is M.STUCK:
                return "stuck"
            return v if isinstance(v, bool) else str(v)

        doc = {"depth": self.depth, "body": {w: enc(v) for w, v in self.body.items()}}
        if self.frontier is not None:
            doc["frontier"] = dict(self.frontier)
        return doc


class Explorer:
    """Memoized walk through the determinization of one machine."""

    def __init__(self, m: Machine):
        self.machine = m
        self._steps: dict = {}

    def step(self, s: MonadValue):
        if s not in self._steps:
            self._steps[s] = det_step(self.machine, s)
        return self._steps[s]

    def reached(self, x, length: int) -> dict:
        """Determinized state reached from ``eta(x)`` for every word of length ``<= length``."""
        kind = self.machine.kind
        reached = {"": M.unit(kind, x)}
        frontier = [""]
        for _ in range(length):
            nxt = []
            for w in frontier:
                _, succ = self.step(reached[w])
                for a in self.machine.alphabet:
                    reached[w + a] = succ[a]
                    nxt.append(w + a)
            frontier = nxt
        return reached

    def behaviour(self, x, n: int) -> WordTable:
        if n < 0:
            raise DomainError("depth must be nonnegative")
        reached = self.reached(x, n)
        body = {w: self.step(s)[0] for w, s in reached.items() if len(w) < n}
        frontier = None
        if not self.machine.kind.is_affine:
            frontier = {w: M.terminal_image(s) for w, s in reached.items() if len(w) == n}
        return WordTable(n, body, frontier)


def n_step_behaviour(m: Machine, x, n: int, explorer: Explorer | None = None) -> WordTable:
    """``c^(n)(x)`` read off the determinization started at ``eta(x)``."""
    return (explorer or Explorer(m)).behaviour(x, n)


def em_project(t: WordTable) -> WordTable:
    """Forget the frontier (postcompose with ``F^n !``)."""
    return WordTable(t.depth, dict(t.body), None)


def table_distance(sig: Signature, s: WordTable, t: WordTable):
    """Distance in ``F^n T 1``: product distance, frontier compared discretely."""
    if s.depth != t.depth:
        raise DomainError("tables of different depth")
    q = sig.quantale
    parts = [sig.algebra.distance(s.body[w], t.body[w]) for w in s.body]
    if s.frontier is not None:
        parts += [q.unit if s.frontier[w] == t.frontier[w] else q.bottom for w in s.frontier]
    return q.meet(parts)


@dataclass
class DistanceReport:
    quantale: Quantale
    per_depth: list
    cumulative: list

    @property
    def meet(self):
        return self.cumulative[-1]

    def to_json(self) -> dict:
        fmt = self.quantale.format
        return {"per_depth": [fmt(v) for v in self.per_depth],
                "cumulative": [fmt(v) for v in self.cumulative],
                "meet": fmt(self.meet)}


def cumulative_meets(q: Quantale, values: list) -> list:
    out, acc = [], q.top
    for v in values:
        acc = q.meet([acc, v])
        out.append(acc)
    return out


def behavioural_distance(m: Machine, x, y, depth: int, explorer: Explorer | None = None
                         ) -> DistanceReport:
    """Distances of the n-step behaviours for ``n = 0..depth`` and their running meet."""
    if depth < 0:
        raise DomainError("depth must be nonnegative")
    explorer = explorer or Explorer(m)
    q = m.signature.quantale
    per_depth = [table_distance(m.signature, explorer.behaviour(x, n), explorer.behaviour(y, n))
                 for n in range(depth + 1)]
    return DistanceReport(q, per_depth, cumulative_meets(q, per_depth))


# --------------------------------------------------------------------------
# Graded monad laws, materialized on tiny carriers
#
# An element of F^n Y is Y itself for n = 0 and (a, (sub_1, ..., sub_k)) with
# one F^(n-1) Y subtree per letter otherwise.


def fmap_f(n: int, g: Callable, tree):
    if n == 0:
        return g(tree)
    v, subs = tree
    return (v, tuple(fmap_f(n - 1, g, s) for s in subs))


def zeta_n(sig: Signature, n: int, t: MonadValue, zeta: Callable = zeta_apply):
    """Iterated law ``T F^n -> F^n T``."""
    if n == 0:
        return t
    v, letters = zeta(sig, t)
    return (v, tuple(zeta_n(sig, n - 1, s, zeta) for s in letters))


def graded_mult(sig: Signature, m: int, n: int, tree, zeta: Callable = zeta_apply):
    """``mu^{m,n} = F^{m+n} mu . F^m zeta^(n) T`` on ``F^m T F^n T X``."""
    kind = sig.kind
    return fmap_f(m, lambda t: fmap_f(n, lambda tt: M.mult(kind, tt), zeta_n(sig, n, t, zeta)), tree)


def graded_map(sig: Signature, n: int, g: Callable, tree):
    """Functor action ``M_n g = F^n T g``."""
    return fmap_f(n, lambda t: M.fmap(sig.kind, g, t), tree)


def random_tree(sig: Signature, n: int, leaf: Callable[[random.Random], object], rng: random.Random):
    if n == 0:
        return leaf(rng)
    v = rng.choice(sig.algebra.grid)
    return (v, tuple(random_tree(sig, n - 1, leaf, rng) for _ in sig.alphabet))


def _m_sampler(sig: Signature, n: int, pool: list):
    """Sampler for ``M_n Y = F^n T Y`` with ``Y`` drawn from ``pool``."""
    kind = sig.kind

    def leaf(rng):
        return M.random_value(kind, pool, rng, max_support=2)

    return lambda rng: random_tree(sig, n, leaf, rng)


def check_graded_monad_laws(sig: Signature, max_depth: int = 2,
                            carriers: Iterable = (("x",), ("x", "y")),
                            zeta: Callable = zeta_apply, samples: int = 60, seed: int = 0
                            ) -> CheckReport:
    """Unit, associativity and depth-1 coequalization laws of ``M_n = F^n T``."""
    rng = random.Random(seed)
    kind = sig.kind
    report = CheckReport("graded-monad-laws", instance=f"{kind.value} depth<={max_depth}")

    def mu(a, b, tree):
        return graded_mult(sig, a, b, tree, zeta)

    for carrier in carriers:
        carrier = list(carrier)
        for n in range(max_depth + 1):
            sample = _m_sampler(sig, n, carrier)
            for _ in range(samples):
                t = sample(rng)
                if mu(0, n, M.unit(kind, t)) != t:
                    report.fail("left-unit", {"n": n, "value": t})
                if mu(n, 0, fmap_f(n, lambda tx: M.fmap(kind, lambda x: M.unit(kind, x), tx), t)) != t:
                    report.fail("right-unit", {"n": n, "value": t})

        for a, b, c in product(range(max_depth + 1), repeat=3):
            if a + b + c > max_depth:
                continue
            inner = [_m_sampler(sig, c, carrier)(rng) for _ in range(6)]
            middle = [_m_sampler(sig, b, inner)(rng) for _ in range(6)]
            outer = _m_sampler(sig, a, middle)
            for _ in range(samples):
                t = outer(rng)
                lhs = mu(a, b + c, graded_map(sig, a, lambda u: mu(b, c, u), t))
                rhs = mu(a + b, c, mu(a, b, t))
                if lhs != rhs:
                    report.fail("associativity", {"m": a, "k": b, "n": c, "value": t})

        for n in range(max_depth):
            inner = [_m_sampler(sig, n, carrier)(rng) for _ in range(6)]
            middle = [M.random_value(kind, inner, rng, max_support=2) for _ in range(6)]
            outer = _m_sampler(sig, 1, middle)
            for _ in range(samples):
                t = outer(rng)
                lhs = mu(1, n, mu(1, 0, t))
                rhs = mu(1, n, graded_map(sig, 1, lambda u: mu(0, n, u), t))
                if lhs != rhs:
                    report.fail("coequalization", {"n": n, "value": t})
    report.breakdown = {"mode": f"seeded sampling, {samples} values per law instance"}
    return report
