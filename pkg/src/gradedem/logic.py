"""Graded modal logics for Moore-shaped machines.

Formulas are trees of truth constants, propositional operators and
modalities.  A modality is given by an evaluation map ``ev: F(Omega) ->
Omega`` and is interpreted on ``FT(Omega)`` as ``ev . F(o)``; 0-ary
modalities first map the transition values to ``Omega`` through a fixed
point of ``Omega``.

Shipped modalities for a signature with alphabet ``Sigma``:

* ``<T>`` (0-ary): the output of the current state;
* ``<a>`` for every letter ``a`` (unary): read ``a``, then evaluate the
  argument on the successor value through the algebra;
* ``<~a>`` (0-ary, ``dist-bh`` only): whether reading ``a`` avoids the
  black hole; it evaluates to ``stuck`` when it does not and to ``1``
  otherwise.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from itertools import product
from typing import Any, Callable, Iterable, Sequence

from . import monad as M
from .graded import WordTable, cumulative_meets, words
from .machine import Machine, Signature, zeta_apply
from .monad import STUCK, AlgebraStructure, MonadKind
from .quantale import Quantale, parse_rational
from .reports import CheckReport, DomainError, SignatureError

# --------------------------------------------------------------------------
# Syntax


@dataclass(frozen=True)
class PropOp:
    """Propositional operator ``Omega^n -> Omega``.

    ``truth`` names the truth-value domain (``"bool"`` or ``"unit"``).  Affine
    operators keep ``coefficients = (c0, c1, ..., cn)``.
    """

    name: str
    arity: int
    truth: str
    fn: Callable = field(compare=False, repr=False)
    coefficients: tuple | None = field(default=None, compare=False, repr=False)

    def __call__(self, *args):
        return self.fn(*args)


def _cached_hash(self) -> int:
    # formulas are deep trees used as memo keys; hash each node once
    h = self.__dict__.get("_hash")
    if h is None:
        h = hash((type(self).__name__,) + tuple(self.__dict__[f] for f in self.__dataclass_fields__))
        object.__setattr__(self, "_hash", h)
    return h


@dataclass(frozen=True)
class TruthConst:
    name: str = "T"
    __hash__ = _cached_hash


@dataclass(frozen=True)
class PropApp:
    op: PropOp
    args: tuple
    __hash__ = _cached_hash


@dataclass(frozen=True)
class ModalApp:
    modality: str
    args: tuple = ()
    __hash__ = _cached_hash


Formula = TruthConst | PropApp | ModalApp


def uniform_depth(phi: Formula) -> int | None:
    """Common modal depth of all leaves, or ``None`` if the depths disagree.

    A 0-ary modality is a leaf at depth 1.
    """
    if isinstance(phi, TruthConst):
        return 0
    if isinstance(phi, ModalApp) and not phi.args:
        return 1
    depths = {uniform_depth(a) for a in phi.args}
    if len(depths) != 1 or None in depths:
        return None
    (d,) = depths
    return d + 1 if isinstance(phi, ModalApp) else d


def word_formula(word: str, tail: Formula) -> Formula:
    for a in reversed(word):
        tail = ModalApp(a, (tail,))
    return tail


TOP_MODALITY = ModalApp("T")
TOP_CONST = TruthConst("T")

# --------------------------------------------------------------------------
# Propositional operators


def _absorbing(fn):
    def wrapped(*args):
        if any(a is STUCK for a in args):
            return STUCK
        return fn(*args)
    return wrapped


def affine_op(name: str, c0, coefficients: Sequence) -> PropOp:
    """``x -> c0 + sum c_i x_i``; must map ``[0,1]^n`` into ``[0,1]``."""
    c0 = Fraction(c0)
    cs = tuple(Fraction(c) for c in coefficients)
    lo = c0 + sum(min(c, 0) for c in cs)
    hi = c0 + sum(max(c, 0) for c in cs)
    if lo < 0 or hi > 1:
        raise DomainError(f"{name}: affine map leaves [0,1]")
    fn = _absorbing(lambda *xs: c0 + sum((c * x for c, x in zip(cs, xs)), Fraction(0)))
    return PropOp(name, len(cs), "unit", fn, (c0,) + cs)


NEG = affine_op("neg", 1, (-1,))


def convex(p) -> PropOp:
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise DomainError("convex weight outside [0,1]")
    return affine_op(f"cc({p})", 0, (p, 1 - p))


OR = PropOp("or", 2, "bool", lambda a, b: a or b)
AND = PropOp("and", 2, "bool", lambda a, b: a and b)
MUL = PropOp("mul", 2, "unit", _absorbing(lambda a, b: a * b))

# --------------------------------------------------------------------------
# Modalities


@dataclass(frozen=True)
class Modality:
    """``ev`` acts on ``(v, (w_a for a in Sigma))`` in ``F(Omega)``.

    ``direct`` is an independently written rule for the induced operator on
    ``FT(Omega)`` (or ``FT1`` when 0-ary), used to check the factorization.
    """

    name: str
    arity: int
    ev: Callable = field(compare=False)
    direct: Callable | None = field(default=None, compare=False)
    point: Any = None

    def apply(self, alg: AlgebraStructure, v, values: tuple):
        """``ev . F(o)`` on ``(v, (t_a))`` with ``t_a`` in ``T(Omega)``."""
        return self.ev(v, tuple(alg(t) for t in values))

    def apply0(self, alg: AlgebraStructure, v, values: tuple):
        """0-ary version on ``(v, (t_a))`` with ``t_a`` in ``T1``."""
        kind = alg.kind
        return self.ev(v, tuple(alg(M.fmap(kind, lambda _: self.point, t)) for t in values))


def top_of(alg: AlgebraStructure):
    return True if alg.quantale.name == "bool" else Fraction(1)


def _direct_letter(alg: AlgebraStructure, i: int) -> Callable:
    kind = alg.kind
    if kind in (M.POW, M.NEPOW):
        return lambda v, ts: True in ts[i].items
    if kind is M.DIST:
        return lambda v, ts: sum((x * w for x, w in ts[i].items), Fraction(0))

    def bh(v, ts):
        t = ts[i]
        if t.is_star or any(x is STUCK for x, _ in t.items):
            return STUCK
        return sum((x * w for x, w in t.items), Fraction(0))
    return bh


def standard_modalities(sig: Signature) -> dict[str, Modality]:
    alg = sig.algebra
    mods = {"T": Modality("T", 0, lambda v, f: v, lambda v, ts: v, top_of(alg))}
    for i, a in enumerate(sig.alphabet):
        mods[a] = Modality(a, 1, lambda v, f, i=i: f[i], _direct_letter(alg, i))
        if sig.kind is M.DISTBH:
            mods["~" + a] = Modality(
                "~" + a, 0, lambda v, f, i=i: f[i],
                lambda v, ts, i=i: STUCK if ts[i].is_star else Fraction(1), Fraction(1))
    return mods


def squaring_modality(sig: Signature) -> Modality:
    """Negative example: ``(v, f) -> v * v`` is not an algebra homomorphism."""
    return Modality("sq", 1, lambda v, f: v * v if v is not STUCK else STUCK)


def literal_black_hole_modalities(sig: Signature) -> list[Modality]:
    """Negative examples: black-hole tests valued in plain ``[0,1]``.

    ``<a>`` returning 0 on the black hole and ``<~a>`` returning 1 on it
    (0 otherwise) are not homomorphisms for the collapsing expectation.
    """
    mods = []
    for i, a in enumerate(sig.alphabet):
        mods.append(Modality(f"lit<{a}>", 1,
                             lambda v, f, i=i: Fraction(0) if f[i] is STUCK else f[i]))
        mods.append(Modality(f"lit<~{a}>", 1,
                             lambda v, f, i=i: Fraction(1) if f[i] is STUCK else Fraction(0)))
    return mods


# --------------------------------------------------------------------------
# Semantics


class Logic:
    """Truth constants, operators and modalities over one signature."""

    def __init__(self, sig: Signature, modalities: dict | None = None):
        self.signature = sig
        self.algebra = sig.algebra
        self.modalities = modalities if modalities is not None else standard_modalities(sig)
        self.constants = {"T": top_of(sig.algebra)}

    def modality(self, name: str) -> Modality:
        try:
            return self.modalities[name]
        except KeyError:
            raise SignatureError(f"modality <{name}> is not admissible for "
                                 f"{self.signature.kind.value} over {self.signature.alphabet}") from None

    def check_formula(self, phi: Formula) -> None:
        if isinstance(phi, TruthConst):
            if phi.name not in self.constants:
                raise SignatureError(f"unknown truth constant {phi.name}")
            return
        if isinstance(phi, PropApp):
            if phi.op.truth != self.algebra.quantale.name:
                raise SignatureError(f"operator {phi.op.name} needs {phi.op.truth} truth values")
            if len(phi.args) != phi.op.arity:
                raise SignatureError(f"{phi.op.name} expects {phi.op.arity} arguments")
        else:
            mod = self.modality(phi.modality)
            if len(phi.args) != mod.arity:
                raise SignatureError(f"<{mod.name}> expects {mod.arity} arguments")
        for a in phi.args:
            self.check_formula(a)


class StateEvaluator:
    """Inductive semantics of formulas on the states of one machine."""

    def __init__(self, m: Machine, logic: Logic | None = None):
        self.machine = m
        self.logic = logic or Logic(m.signature)
        self._memo: dict = {}

    def __call__(self, phi: Formula, x):
        key = (phi, x)
        if key not in self._memo:
            self._memo[key] = self._eval(phi, x)
        return self._memo[key]

    def _eval(self, phi, x):
        m, logic = self.machine, self.logic
        alg = logic.algebra
        if isinstance(phi, TruthConst):
            return logic.constants[phi.name]
        if isinstance(phi, PropApp):
            return phi.op(*(self(a, x) for a in phi.args))
        mod = logic.modality(phi.modality)
        v, ts = m.coalgebra(x)
        if mod.arity == 0:
            return mod.apply0(alg, v, ts)
        (arg,) = phi.args
        return mod.apply(alg, v, tuple(M.fmap(m.kind, lambda y: self(arg, y), t) for t in ts))


def eval_state(phi: Formula, m: Machine, x, logic: Logic | None = None):
    logic = logic or Logic(m.signature)
    logic.check_formula(phi)
    return StateEvaluator(m, logic)(phi, x)


def eval_on_behaviour(phi: Formula, t: WordTable, logic: Logic):
    """Evaluate a uniform-depth formula on an n-step behaviour only."""
    logic.check_formula(phi)
    d = uniform_depth(phi)
    if d is None:
        raise DomainError("formula does not have uniform depth")
    if d > t.depth:
        raise DomainError(f"formula depth {d} exceeds table depth {t.depth}")
    if d < t.depth:
        t = t.truncate(d)
    return _eval_table(phi, t, logic)


def _t1(kind: MonadKind, t: WordTable, word: str):
    if t.frontier is None:
        return M.unit(kind, ())
    return M.t1_value(kind, t.frontier[word])


def _eval_table(phi, t: WordTable, logic: Logic):
    alg = logic.algebra
    kind = logic.signature.kind
    if isinstance(phi, TruthConst):
        point = logic.constants[phi.name]
        return alg(M.fmap(kind, lambda _: point, _t1(kind, t, "")))
    if isinstance(phi, PropApp):
        return phi.op(*(_eval_table(a, t, logic) for a in phi.args))
    mod = logic.modality(phi.modality)
    alphabet = logic.signature.alphabet
    if mod.arity == 0:
        return mod.apply0(alg, t.body[""], tuple(_t1(kind, t, a) for a in alphabet))
    (arg,) = phi.args
    return mod.ev(t.body[""], tuple(_eval_table(arg, t.subtable(a), logic) for a in alphabet))


# --------------------------------------------------------------------------
# Fragments and logical distance


def word_fragment(logic: Logic, depth: int) -> list[Formula]:
    """Modal-only formulas of uniform depth exactly ``depth``."""
    return list(_word_fragment(logic.signature, depth))


@lru_cache(maxsize=256)
def _word_fragment(sig: Signature, depth: int) -> tuple:
    out: list[Formula] = []
    if depth == 0:
        return (TOP_CONST,) if sig.kind is M.POW else ()
    for w in words(sig.alphabet, depth - 1):
        out.append(word_formula(w, TOP_MODALITY))
    if sig.kind is M.POW:
        out += [word_formula(w, TOP_CONST) for w in words(sig.alphabet, depth)]
    if sig.kind is M.DISTBH:
        out += [word_formula(w, ModalApp("~" + a)) for w in words(sig.alphabet, depth - 1)
                for a in sig.alphabet]
    return tuple(out)


def default_prop_ops(sig: Signature, seed: int = 0, convex_count: int = 5) -> list[PropOp]:
    """Disjunction for Boolean presets; negation and random dyadic mixtures otherwise."""
    if sig.quantale.name == "bool":
        return [OR]
    rng = random.Random(seed)
    return [NEG] + [convex(Fraction(rng.randint(1, 7), 8)) for _ in range(convex_count)]


def propositional_fragment(logic: Logic, depth: int, ops: Sequence[PropOp], size: int = 12,
                           seed: int = 0) -> list[Formula]:
    """Word fragment at ``depth`` plus ``size`` seeded propositional combinations."""
    rng = random.Random(seed * 1009 + depth)
    pool = list(word_fragment(logic, depth))
    if not pool or not ops:
        return pool
    for _ in range(size):
        op = rng.choice(list(ops))
        pool.append(PropApp(op, tuple(rng.choice(pool) for _ in range(op.arity))))
    return pool


@dataclass
class LogicalDistanceReport:
    quantale: Quantale
    per_depth: list
    cumulative: list
    witnesses: list

    @property
    def meet(self):
        return self.cumulative[-1]

    def to_json(self) -> dict:
        fmt = self.quantale.format
        return {"per_depth": [fmt(v) for v in self.per_depth],
                "cumulative": [fmt(v) for v in self.cumulative],
                "meet": fmt(self.meet),
                "witnesses": [format_formula(w) if w is not None else None for w in self.witnesses]}


FRAGMENTS = ("word", "propositional")


def logical_distance(m: Machine, x, y, depth: int, fragment: str = "word",
                     prop_ops: Sequence[PropOp] | None = None, size: int = 12, seed: int = 0,
                     evaluator: StateEvaluator | None = None) -> LogicalDistanceReport:
    """Per-depth meet of ``d(phi(x), phi(y))`` over a finite fragment of formulas."""
    if fragment not in FRAGMENTS:
        raise DomainError(f"unknown fragment {fragment!r}; expected one of {FRAGMENTS}")
    ev = evaluator or StateEvaluator(m)
    logic = ev.logic
    q = m.signature.quantale
    dist = m.signature.algebra.distance
    if fragment == "propositional" and prop_ops is None:
        prop_ops = default_prop_ops(m.signature, seed)
    per_depth, witnesses = [], []
    for n in range(depth + 1):
        if fragment == "word":
            formulas = word_fragment(logic, n)
        else:
            formulas = propositional_fragment(logic, n, prop_ops, size, seed)
        best, witness = q.top, None
        for phi in formulas:
            dv = dist(ev(phi, x), ev(phi, y))
            if witness is None or not q.leq(best, dv):
                best = q.meet([best, dv])
                if dv == best:
                    witness = phi
        per_depth.append(best)
        witnesses.append(witness)
    return LogicalDistanceReport(q, per_depth, cumulative_meets(q, per_depth), witnesses)


# --------------------------------------------------------------------------
# Operator checks


def _omega_points(alg: AlgebraStructure, arity: int) -> list:
    return list(product(alg.grid, repeat=arity))


def check_prop_op(p: PropOp, alg: AlgebraStructure, seed: int = 0) -> CheckReport:
    """``o . T p == p . o^(n)`` on grid values of ``T(Omega^n)``."""
    rng = random.Random(seed)
    report = CheckReport("prop-op", instance=f"{p.name} over {alg.name}")
    if p.truth != alg.quantale.name:
        report.fail("domain", f"{p.name} is defined on {p.truth} truth values")
        return report
    kind = alg.kind
    points = _omega_points(alg, p.arity)
    values, mode = M.values_for(kind, points, rng, samples=400)
    for t in values:
        lhs = alg(M.fmap(kind, lambda tup: p(*tup), t))
        rhs = p(*(alg(M.fmap(kind, lambda tup, i=i: tup[i], t)) for i in range(p.arity)))
        if lhs != rhs:
            report.fail("homomorphy", {"value": t, "lhs": lhs, "rhs": rhs})
    report.breakdown = {"mode": mode, "values": len(values)}
    return report


def check_modality(mod: Modality, sig: Signature, seed: int = 0, samples: int = 400) -> CheckReport:
    """Factorization through ``F(o)`` and homomorphy of ``ev`` for one modality."""
    rng = random.Random(seed)
    alg, kind = sig.algebra, sig.kind
    report = CheckReport("modality", instance=f"<{mod.name}> over {alg.name}")
    k = len(sig.alphabet)

    if mod.direct is not None:
        if mod.arity == 0:
            t1s = [M.unit(kind, ())] + ([M.t1_value(kind, False)] if not kind.is_affine else [])
            cases = [(v, ts) for v in alg.grid for ts in product(t1s, repeat=k)]
            for v, ts in cases:
                if mod.direct(v, ts) != mod.apply0(alg, v, ts):
                    report.fail("factorization", {"output": v, "transitions": ts})
        else:
            for _ in range(samples):
                v = rng.choice(alg.grid)
                ts = tuple(M.random_value(kind, alg.grid, rng) for _ in range(k))
                if mod.direct(v, ts) != mod.apply(alg, v, ts):
                    report.fail("factorization", {"output": v, "transitions": ts})

    f_omega = [(v, f) for v in alg.grid for f in product(alg.grid, repeat=k)]
    values, mode = M.values_for(kind, f_omega, rng, samples=samples)
    for t in values:
        out, letters = zeta_apply(sig, t)
        lhs = mod.ev(out, tuple(alg(s) for s in letters))
        rhs = alg(M.fmap(kind, lambda p: mod.ev(*p), t))
        if lhs != rhs:
            report.fail("homomorphy", {"value": t, "lhs": lhs, "rhs": rhs})
    report.breakdown = {"mode": mode, "values": len(values)}
    return report


# --------------------------------------------------------------------------
# Text syntax
#
#   phi ::= <T> | <~a> | <a> phi | const(T)
#         | neg(phi) | or(phi, phi) | and(phi, phi) | mul(phi, phi) | cc(p/q, phi, phi)

_TOKEN = re.compile(r"\s*(<~?[A-Za-z0-9]+>|[A-Za-z]+|\d+(?:/\d+)?|[(),])")


def _tokens(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            raise DomainError(f"cannot parse formula at {text[pos:]!r}")
        out.append(match.group(1))
        pos = match.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


_NAMED_OPS = {"neg": NEG, "or": OR, "and": AND, "mul": MUL}


def parse_formula(text: str) -> Formula:
    tokens = _tokens(text)
    phi, pos = _parse(tokens, 0)
    if pos != len(tokens):
        raise DomainError(f"trailing input in formula: {' '.join(tokens[pos:])}")
    return phi


def _expect(tokens, pos, tok):
    if pos >= len(tokens) or tokens[pos] != tok:
        raise DomainError(f"expected {tok!r} in formula")
    return pos + 1


def _parse(tokens, pos):
    if pos >= len(tokens):
        raise DomainError("unexpected end of formula")
    tok = tokens[pos]
    if tok.startswith("<"):
        name = tok[1:-1]
        if name == "T" or name.startswith("~"):
            return ModalApp(name), pos + 1
        arg, pos = _parse(tokens, pos + 1)
        return ModalApp(name, (arg,)), pos
    if tok == "const":
        pos = _expect(tokens, pos + 1, "(")
        name = tokens[pos]
        pos = _expect(tokens, pos + 1, ")")
        return TruthConst(name), pos
    if tok == "cc":
        pos = _expect(tokens, pos + 1, "(")
        weight = parse_rational(tokens[pos])
        pos = _expect(tokens, pos + 1, ",")
        a, pos = _parse(tokens, pos)
        pos = _expect(tokens, pos, ",")
        b, pos = _parse(tokens, pos)
        pos = _expect(tokens, pos, ")")
        return PropApp(convex(weight), (a, b)), pos
    if tok in _NAMED_OPS:
        op = _NAMED_OPS[tok]
        pos = _expect(tokens, pos + 1, "(")
        args = []
        for i in range(op.arity):
            if i:
                pos = _expect(tokens, pos, ",")
            a, pos = _parse(tokens, pos)
            args.append(a)
        pos = _expect(tokens, pos, ")")
        return PropApp(op, tuple(args)), pos
    raise DomainError(f"unexpected token {tok!r} in formula")


def format_formula(phi: Formula) -> str:
    if isinstance(phi, TruthConst):
        return f"const({phi.name})"
    if isinstance(phi, ModalApp):
        if not phi.args:
            return f"<{phi.modality}>"
        if len(phi.args) == 1:
            return f"<{phi.modality}>" + format_formula(phi.args[0])
        return f"{phi.modality}(" + ",".join(format_formula(a) for a in phi.args) + ")"
    if phi.op.name.startswith("cc("):
        weight = phi.op.name[3:-1]
        return f"cc({weight}," + ",".join(format_formula(a) for a in phi.args) + ")"
    return f"{phi.op.name}(" + ",".join(format_formula(a) for a in phi.args) + ")"
