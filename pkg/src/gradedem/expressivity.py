"""Separation and expressivity checks, the tree-trace counterexample, random machines."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Sequence

from . import monad as M
from .graded import Explorer, behavioural_distance, words
from .logic import (Logic, ModalApp, PropOp, StateEvaluator, TOP_MODALITY, check_prop_op,
                    default_prop_ops, format_formula, logical_distance, word_formula)
from .machine import Machine, Signature, build, preset
from .monad import STAR, MonadKind
from .quantale import BOOL, Quantale
from .reports import CheckReport, DomainError, expect_failure
from .vcat import FinVCat, VFunctor, is_initial_source, make_discrete, quantale_object

# --------------------------------------------------------------------------
# Random machines


def random_machine(kind: MonadKind | str, quantale: Quantale | str | None = None,
                   n_states: int = 3, alphabet: Sequence[str] = ("a", "b"), seed: int = 0,
                   star_probability: float = 0.15, empty_probability: float = 0.15,
                   denominator: int = 4) -> Machine:
    """Seeded random machine over one of the four presets.

    Outputs and weights are dyadic with the given denominator.  ``pow``
    transitions are empty with ``empty_probability``; ``dist-bh``
    transitions put some mass on the black hole with ``star_probability``.
    """
    kind = MonadKind(kind) if isinstance(kind, str) else kind
    sig = preset(kind.value, tuple(alphabet))
    if quantale is not None:
        qname = quantale if isinstance(quantale, str) else quantale.name
        if qname != sig.quantale.name:
            raise DomainError(f"{kind.value} machines are valued in {sig.quantale.name}, not {qname}")
    if n_states < 1 or not alphabet:
        raise DomainError("need at least one state and one letter")
    rng = random.Random(f"{kind.value}/{n_states}/{''.join(alphabet)}/{seed}")
    states = [f"s{i}" for i in range(n_states)]
    if sig.quantale is BOOL:
        out = {x: rng.random() < 0.5 for x in states}
    else:
        out = {x: Fraction(rng.randint(0, denominator), denominator) for x in states}
    trans = {}
    for x in states:
        row = {}
        for a in alphabet:
            if kind is M.POW:
                if rng.random() < empty_probability:
                    row[a] = set()
                else:
                    row[a] = set(rng.sample(states, rng.randint(1, min(2, n_states))))
            elif kind is M.NEPOW:
                row[a] = set(rng.sample(states, rng.randint(1, min(2, n_states))))
            else:
                targets = rng.sample(states, rng.randint(1, min(3, n_states)))
                if kind is M.DISTBH and rng.random() < star_probability:
                    targets = targets[:-1] + [STAR] if len(targets) > 1 else [STAR]
                row[a] = _dyadic_weights(targets, denominator, rng)
        trans[x] = row
    return build(sig, out, trans)


def _dyadic_weights(targets: list, denominator: int, rng: random.Random) -> dict:
    k = len(targets)
    denominator = max(denominator, k)
    cuts = sorted(rng.sample(range(1, denominator), k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [denominator])]
    return {t: Fraction(p, denominator) for t, p in zip(targets, parts)}


# --------------------------------------------------------------------------
# Depth-1 separation for the Moore functor


def _omega_space(sig: Signature) -> FinVCat:
    alg = sig.algebra
    return FinVCat.from_function(sig.quantale, alg.grid, alg.distance)


def lift_family(sig: Signature, a0: FinVCat, family: Sequence[VFunctor]) -> tuple[FinVCat, list]:
    """``F A0 = Omega x A0^Sigma`` with the maps ``<T>`` and ``<a> . F h``."""
    omega = _omega_space(sig)
    q = sig.quantale
    k = len(sig.alphabet)
    points = [(v, f) for v in omega.points for f in product(a0.points, repeat=k)]

    def dist(p, r):
        return q.meet([omega.d(p[0], r[0])] + [a0.d(u, w) for u, w in zip(p[1], r[1])])

    fa0 = FinVCat.from_function(q, points, dist)
    maps = [VFunctor(fa0, omega, lambda p: p[0], name="<T>")]
    for i, a in enumerate(sig.alphabet):
        for h in family:
            maps.append(VFunctor(fa0, h.cod, lambda p, i=i, h=h: h(p[1][i]), name=f"<{a}>{h.name}"))
    return fa0, maps


def check_depth1_separation_F(sig: Signature, a0: FinVCat, family: Sequence[VFunctor],
                              label: str = "") -> CheckReport:
    """An initial family on ``A0`` must lift to an initial family on ``F A0``."""
    report = CheckReport("depth1-separation", instance=label or f"{sig.preset} on {len(a0)} points")
    ok, witness = is_initial_source(a0, family)
    if not ok:
        report.fail("family-initial", _pair_witness(witness))
    fa0, maps = lift_family(sig, a0, family)
    ok, witness = is_initial_source(fa0, maps)
    if not ok:
        report.fail("lifted-initial", _pair_witness(witness))
    report.breakdown = {"points": len(fa0), "maps": len(maps)}
    return report


def _pair_witness(w):
    x, y, lhs, rhs = w
    return {"x": x, "y": y, "distance": lhs, "meet_over_maps": rhs}


def separation_instances(sig: Signature) -> list[tuple[str, FinVCat, list, bool]]:
    """Small test spaces with a separating family, plus one family missing a separator."""
    q = sig.quantale
    omega = _omega_space(sig)
    out = []
    if q is BOOL:
        a0 = make_discrete(q, ("p", "q"))
        chars = [VFunctor(a0, omega, lambda z, c=c: z == c, name=f"chi_{c}") for c in a0.points]
        out.append(("discrete 2 points, characteristic maps", a0, chars, True))
        a3 = make_discrete(q, ("p", "q", "r"))
        every = [VFunctor(a3, omega, lambda z, bits=bits: bits[a3.points.index(z)], name=f"f{bits}")
                 for bits in product((False, True), repeat=3)]
        out.append(("discrete 3 points, all maps", a3, every, True))
        out.append(("discrete 3 points, one map", a3,
                    [VFunctor(a3, omega, lambda z: z == "p", name="chi_p")], False))
    else:
        d = {("p", "q"): Fraction(1, 2), ("q", "r"): Fraction(1, 2), ("p", "r"): Fraction(3, 4)}

        def dist(x, y):
            if x == y:
                return Fraction(0)
            return d.get((x, y), d.get((y, x)))

        a0 = FinVCat.from_function(q, ("p", "q", "r"), dist, separated=True)
        to_point = [VFunctor(a0, omega, lambda z, c=c: dist(c, z), name=f"d_{c}") for c in a0.points]
        out.append(("3 points, distance-to-point maps", a0, to_point, True))
        a2 = quantale_object(q, (Fraction(0), Fraction(1, 2), Fraction(1)))
        out.append(("grid {0,1/2,1}, identity", a2,
                    [VFunctor(a2, omega, lambda z: z, name="id")], True))
        # d_r alone sees p and q only 1/4 apart
        out.append(("3 points, missing separator", a0, to_point[2:], False))
    return out


def separation_suite(sig: Signature) -> CheckReport:
    report = CheckReport("separation-suite", instance=sig.preset)
    for label, a0, family, expected in separation_instances(sig):
        child = check_depth1_separation_F(sig, a0, family, label)
        report.add(child if expected else expect_failure(child, label))
    return report


# --------------------------------------------------------------------------
# Expressivity and invariance


def _fmt(q: Quantale, values):
    return [q.format(v) for v in values]


def check_expressivity(m: Machine, x, y, depth: int, explorer: Explorer | None = None,
                       evaluator: StateEvaluator | None = None) -> CheckReport:
    """Behavioural and word-fragment logical distance agree at every depth up to ``depth``.

    Both sides are compared as running meets over depths ``0..n``, i.e. the
    distance over all formulas of uniform depth at most ``n``.
    """
    if depth < 1:
        raise DomainError("expressivity checks need depth >= 1")
    q = m.signature.quantale
    report = CheckReport("expressivity", instance=f"{m.kind.value} {x!r} vs {y!r} depth<={depth}")
    db = behavioural_distance(m, x, y, depth, explorer)
    dl = logical_distance(m, x, y, depth, "word", evaluator=evaluator)
    for n in range(depth + 1):
        if db.cumulative[n] != dl.cumulative[n]:
            report.fail("equality", {"depth": n, "behavioural": q.format(db.cumulative[n]),
                                     "logical": q.format(dl.cumulative[n])})
            break
    report.breakdown = {"behavioural": _fmt(q, db.cumulative), "logical": _fmt(q, dl.cumulative)}
    return report


@lru_cache(maxsize=None)
def _op_is_valid(op: PropOp, kind: MonadKind) -> bool:
    return check_prop_op(op, M.standard_algebra(kind)).passed


def check_invariance(m: Machine, x, y, depth: int, prop_ops: Sequence[PropOp] | None = None,
                     size: int = 12, seed: int = 0, explorer: Explorer | None = None,
                     evaluator: StateEvaluator | None = None) -> CheckReport:
    """``d^b <= d^L`` in the quantale order at every depth, over a sampled propositional closure."""
    q = m.signature.quantale
    report = CheckReport("invariance", instance=f"{m.kind.value} {x!r} vs {y!r} depth<={depth}")
    if prop_ops is None:
        prop_ops = default_prop_ops(m.signature, seed)
    for op in prop_ops:
        if not _op_is_valid(op, m.kind):
            raise DomainError(f"operator {op.name} is not a homomorphism for {m.kind.value}")
    db = behavioural_distance(m, x, y, depth, explorer)
    dl = logical_distance(m, x, y, depth, "propositional", prop_ops=prop_ops, size=size,
                          seed=seed, evaluator=evaluator)
    for n in range(depth + 1):
        if not q.leq(db.per_depth[n], dl.per_depth[n]):
            report.fail("inequality", {"depth": n, "behavioural": q.format(db.per_depth[n]),
                                       "logical": q.format(dl.per_depth[n]),
                                       "formula": format_formula(dl.witnesses[n])})
    report.breakdown = {"behavioural": _fmt(q, db.per_depth), "logical": _fmt(q, dl.per_depth)}
    return report


# --------------------------------------------------------------------------
# Black-hole separation


def black_hole_fragment(logic: Logic, depth: int) -> list:
    """``w<T>`` and ``w<~a>`` for all words ``w`` shorter than ``depth``."""
    out = []
    for k in range(depth):
        for w in words(logic.signature.alphabet, k):
            out.append(word_formula(w, TOP_MODALITY))
            out += [word_formula(w, ModalApp("~" + a)) for a in logic.signature.alphabet]
    return out


def check_black_hole_separation(m: Machine, x, y, depth: int, explorer: Explorer | None = None,
                                evaluator: StateEvaluator | None = None) -> CheckReport:
    """Different depth-``depth`` behaviours are told apart by a word formula; equal ones are not."""
    if m.kind is not M.DISTBH:
        raise DomainError("black-hole separation applies to dist-bh machines")
    explorer = explorer or Explorer(m)
    ev = evaluator or StateEvaluator(m)
    report = CheckReport("black-hole-separation",
                         instance=f"{x!r} vs {y!r} depth {depth}")
    same = explorer.behaviour(x, depth) == explorer.behaviour(y, depth)
    separating = None
    for phi in black_hole_fragment(ev.logic, depth):
        if ev(phi, x) != ev(phi, y):
            separating = phi
            break
    if same and separating is not None:
        report.fail("equal-behaviours-separated", format_formula(separating))
    if not same and separating is None:
        report.fail("no-separating-formula", {"x": x, "y": y, "depth": depth})
    report.breakdown = {"equal_behaviours": same,
                        "formula": format_formula(separating) if separating else None}
    return report


# --------------------------------------------------------------------------
# Tree-trace counterexample: F X = X x X, T = finite powerset, Kleisli-style


@dataclass(frozen=True)
class Tree:
    """Formula over the tree signature: ``top`` constant, binary diamond, disjunction."""

    head: str
    args: tuple = ()

    def __str__(self) -> str:
        if self.head == "top":
            return "T"
        return f"{self.head}(" + ",".join(str(a) for a in self.args) + ")"

    def depth(self):
        if self.head == "top":
            return 0
        ds = {a.depth() for a in self.args}
        if len(ds) != 1 or None in ds:
            return None
        (d,) = ds
        return d + 1 if self.head == "dia" else d


TOP = Tree("top")


def dia(a: Tree, b: Tree) -> Tree:
    return Tree("dia", (a, b))


TREE_COALGEBRA = {"x": {("z", "z")}, "y": {("x", "z")}, "z": set()}


def tree_executable(c: dict, s, n: int) -> bool:
    """Whether the complete binary tree of depth ``n`` can be executed from ``s``."""
    if n == 0:
        return True
    return any(tree_executable(c, left, n - 1) and tree_executable(c, right, n - 1)
               for left, right in c[s])


def tree_eval(c: dict, phi: Tree, s) -> bool:
    if phi.head == "top":
        return True
    if phi.head == "or":
        return tree_eval(c, phi.args[0], s) or tree_eval(c, phi.args[1], s)
    # join of first components and join of second components, taken separately
    first = any(tree_eval(c, phi.args[0], left) for left, _ in c[s])
    second = any(tree_eval(c, phi.args[1], right) for _, right in c[s])
    return first and second


def uniform_tree_formulas(c: dict, depth: int) -> dict[int, list[Tree]]:
    """Uniform formulas per depth, one representative per semantic value on the states."""
    states = sorted(c)
    layers: dict[int, list[Tree]] = {}
    for n in range(depth + 1):
        seeds = [TOP] if n == 0 else [dia(a, b) for a in layers[n - 1] for b in layers[n - 1]]
        seen: dict = {}
        frontier = list(seeds)
        while frontier:
            nxt = []
            for phi in frontier:
                key = tuple(tree_eval(c, phi, s) for s in states)
                if key not in seen:
                    seen[key] = phi
                    nxt.append(phi)
            frontier = [Tree("or", (a, b)) for a in nxt for b in list(seen.values())]
        layers[n] = list(seen.values())
    return layers


def appendix_counterexample(depth: int = 5) -> CheckReport:
    """Graded-equivalent states separated by a formula of non-uniform depth."""
    c = TREE_COALGEBRA
    report = CheckReport("tree-trace-counterexample", instance="x, y in {x, y, z}")
    trace = {s: [tree_executable(c, s, n) for n in range(depth + 1)] for s in ("x", "y")}
    if trace["x"] != trace["y"]:
        n = next(i for i, (a, b) in enumerate(zip(trace["x"], trace["y"])) if a != b)
        report.fail("graded-equivalence", {"depth": n})
    phi = dia(dia(TOP, TOP), TOP)
    values = {s: tree_eval(c, phi, s) for s in ("x", "y")}
    if not (values["x"] is False and values["y"] is True):
        report.fail("non-uniform-separation", {"formula": str(phi), "values": values})
    uniform = dia(dia(TOP, TOP), dia(TOP, TOP))
    if tree_eval(c, uniform, "x") != tree_eval(c, uniform, "y"):
        report.fail("uniform-agreement", str(uniform))
    layers = uniform_tree_formulas(c, depth)
    for n, formulas in layers.items():
        for f in formulas:
            if tree_eval(c, f, "x") != tree_eval(c, f, "y"):
                report.fail("uniform-agreement", {"depth": n, "formula": str(f)})
    report.breakdown = {
        "executable": {s: trace[s] for s in trace},
        "non_uniform": {"formula": str(phi), "x": values["x"], "y": values["y"]},
        "uniform_classes": {n: len(fs) for n, fs in layers.items()},
    }
    return report
