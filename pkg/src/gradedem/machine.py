"""Moore-shaped ``FT``-coalgebras and their determinization.

A machine has an output in ``A`` per state and, per letter, a monad value
of successor states.  The output object ``A`` is the truth-value object of
the signature's algebra.  Determinization runs the generalized powerset
construction ``TX -> FTX`` given by the Eilenberg-Moore law of a monad
over ``A x (-)^Sigma`` built from the output algebra.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Callable, Iterable, Mapping, Sequence

from . import monad as M
from .monad import STAR, AlgebraStructure, MonadKind, MonadValue
from .quantale import QUANTALES, Quantale, parse_rational
from .reports import CheckReport, DomainError, ResourceLimitError

RESERVED_LETTERS = set("T")


@dataclass(frozen=True)
class Signature:
    """Alphabet, branching monad and output algebra of a machine."""

    alphabet: tuple
    kind: MonadKind
    algebra: AlgebraStructure

    def __post_init__(self):
        if not self.alphabet:
            raise DomainError("alphabet must be nonempty")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise DomainError("duplicate letters in alphabet")
        for a in self.alphabet:
            if not (isinstance(a, str) and len(a) == 1 and a.isalnum()) or a in RESERVED_LETTERS:
                raise DomainError(f"letters must be single alphanumeric characters other than 'T': {a!r}")
        if self.algebra.kind is not self.kind:
            raise DomainError("output algebra does not match the monad")

    @property
    def quantale(self) -> Quantale:
        return self.algebra.quantale

    @property
    def preset(self) -> str:
        return self.kind.value


PRESET_QUANTALE = {"pow": "bool", "nepow": "bool", "dist": "unit", "dist-bh": "unit"}


def preset(name: str, alphabet: Iterable[str] = ("a", "b")) -> Signature:
    """One of the shipped signatures ``pow``, ``nepow``, ``dist``, ``dist-bh``."""
    try:
        kind = MonadKind(name)
    except ValueError:
        raise DomainError(f"unknown preset {name!r}") from None
    return Signature(tuple(alphabet), kind, M.standard_algebra(kind))


@dataclass(frozen=True)
class Machine:
    signature: Signature
    states: tuple
    out: Mapping = field(hash=False)
    trans: Mapping = field(hash=False)

    def __post_init__(self):
        sig = self.signature
        if not self.states:
            raise DomainError("machine needs at least one state")
        known = set(self.states)
        for x in self.states:
            if x not in self.out:
                raise DomainError(f"missing output for state {x!r}")
            v = self.out[x]
            if not sig.algebra.contains(v) or v is M.STUCK:
                raise DomainError(f"output of {x!r} outside the output object: {v!r}")
            for a in sig.alphabet:
                t = self.trans.get((x, a))
                if not isinstance(t, MonadValue) or t.kind is not sig.kind:
                    raise DomainError(f"transition ({x!r}, {a!r}) is not a {sig.kind.value} value")
                for y in t.support():
                    if y is not STAR and y not in known:
                        raise DomainError(f"transition ({x!r}, {a!r}) targets unknown state {y!r}")

    @property
    def alphabet(self) -> tuple:
        return self.signature.alphabet

    @property
    def kind(self) -> MonadKind:
        return self.signature.kind

    def coalgebra(self, x) -> tuple:
        """``c(x) = (out(x), (trans(x, a) for a in alphabet))``."""
        return (self.out[x], tuple(self.trans[x, a] for a in self.alphabet))


def build(signature: Signature, out: Mapping, trans: Mapping) -> Machine:
    """Convenience constructor; ``trans`` maps ``state -> letter -> payload``."""
    states = tuple(out)
    table = {}
    for x, row in trans.items():
        for a, payload in row.items():
            table[x, a] = payload if isinstance(payload, MonadValue) else M.make(signature.kind, payload)
    return Machine(signature, states, dict(out), table)


# --------------------------------------------------------------------------
# The Eilenberg-Moore law


def zeta_apply(sig: Signature, t: MonadValue) -> tuple:
    """``T(A x X^Sigma) -> A x (TX)^Sigma``: algebra on outputs, pushforward per letter."""
    kind = sig.kind
    output = sig.algebra(M.fmap(kind, lambda p: p[0], t))
    letters = tuple(M.fmap(kind, lambda p, i=i: p[1][i], t) for i in range(len(sig.alphabet)))
    return (output, letters)


def powerset_zeta(sig: Signature, t: MonadValue) -> tuple:
    """Closed formula of the powerset law: join of outputs, image sets per letter."""
    output = any(v for v, _ in t.items)
    letters = tuple(M.powerset(f[i] for _, f in t.items) for i in range(len(sig.alphabet)))
    return (output, letters)


def det_step(m: Machine, s: MonadValue, zeta: Callable | None = None) -> tuple:
    """One step of the determinized machine at ``s``: ``F mu . zeta . T c``.

    Returns ``(output, successors)`` with successors keyed by letter.
    """
    zeta = zeta or zeta_apply
    kind = m.kind
    tc = M.fmap(kind, m.coalgebra, s)
    output, letters = zeta(m.signature, tc)
    return output, {a: M.mult(kind, tt) for a, tt in zip(m.alphabet, letters)}


def f_points(sig: Signature, carrier: Sequence) -> list:
    return [(v, f) for v in sig.algebra.grid
            for f in product(carrier, repeat=len(sig.alphabet))]


def check_em_law(sig: Signature, carriers: Iterable[Sequence] = (("x",), ("x", "y"), ("x", "y", "z")),
                 zeta: Callable | None = None, seed: int = 0) -> CheckReport:
    """Verify the unit triangle and multiplication pentagon of the law."""
    zeta = zeta or zeta_apply
    kind = sig.kind
    rng = random.Random(seed)
    report = CheckReport("em-law", instance=f"{kind.value} |Sigma|={len(sig.alphabet)}")
    modes = {}
    for carrier in carriers:
        fx = f_points(sig, carrier)
        for p in fx:
            expected = (p[0], tuple(M.unit(kind, x) for x in p[1]))
            if zeta(sig, M.unit(kind, p)) != expected:
                report.fail("unit", {"carrier": carrier, "point": p})
        tfx, _ = M.values_for(kind, fx, rng, samples=120)
        ttfx, mode = M.values_for(kind, tfx, rng, samples=200)
        modes[len(carrier)] = mode
        for tt in ttfx:
            inner = M.fmap(kind, lambda t: zeta(sig, t), tt)
            v, letters = zeta(sig, inner)
            lhs = (v, tuple(M.mult(kind, x) for x in letters))
            rhs = zeta(sig, M.mult(kind, tt))
            if lhs != rhs:
                report.fail("multiplication", {"carrier": carrier, "value": tt})
    report.breakdown = {"TTFX": modes}
    return report


def swapped_zeta(sig: Signature, t: MonadValue) -> tuple:
    """A deliberately corrupted law that swaps the first two letters."""
    output, letters = zeta_apply(sig, t)
    letters = list(letters)
    letters[0], letters[1] = letters[1], letters[0]
    return output, tuple(letters)


# --------------------------------------------------------------------------
# Bounded determinization


@dataclass
class DetGraph:
    machine: Machine
    nodes: list
    depth: dict
    output: dict
    succ: dict

    def index(self, s: MonadValue) -> int:
        return self.nodes.index(s)

    def to_json(self) -> dict:
        fmt = self.machine.signature.algebra.format
        ids = {s: i for i, s in enumerate(self.nodes)}
        nodes = []
        for s in self.nodes:
            entry = {"id": ids[s], "state": monad_value_to_json(s), "depth": self.depth[s]}
            if s in self.output:
                entry["output"] = _value_json(self.output[s])
                entry["succ"] = {a: ids[t] for a, t in self.succ[s].items()}
            nodes.append(entry)
        return {"monad": self.machine.kind.value, "nodes": nodes}


def reachable_determinization(m: Machine, roots: Iterable[MonadValue], depth: int,
                              cap: int = 10_000) -> DetGraph:
    """Breadth-first exploration of the determinized machine up to ``depth`` steps.

    Nodes at the depth bound are listed but not expanded.
    """
    if depth < 0:
        raise DomainError("depth bound must be nonnegative")
    graph = DetGraph(m, [], {}, {}, {})
    queue: deque = deque()
    for r in roots:
        if r not in graph.depth:
            graph.nodes.append(r)
            graph.depth[r] = 0
            queue.append(r)
    while queue:
        s = queue.popleft()
        if graph.depth[s] >= depth:
            continue
        out, succ = det_step(m, s)
        graph.output[s], graph.succ[s] = out, succ
        for a in m.alphabet:
            t = succ[a]
            if t not in graph.depth:
                if len(graph.nodes) >= cap:
                    raise ResourceLimitError(f"determinization exceeded the cap of {cap} states")
                graph.nodes.append(t)
                graph.depth[t] = graph.depth[s] + 1
                queue.append(t)
    return graph


# --------------------------------------------------------------------------
# JSON documents


class MachineFormatError(ValueError):
    def __init__(self, errors: list[dict]):
        super().__init__("; ".join(f"{e['path']}: {e['message']}" for e in errors))
        self.errors = errors


def _value_json(v):
    if v is M.STUCK:
        return "stuck"
    if isinstance(v, bool):
        return v
    return str(v)


def monad_value_to_json(t: MonadValue):
    if t.kind.is_distribution:
        w = t.weights()
        return {("*" if x is STAR else str(x)): str(w[x]) for x in t.support()}
    return [str(x) for x in t.support()]


def _parse_out(sig: Signature, raw, path, errors):
    if sig.quantale.name == "bool":
        if isinstance(raw, bool):
            return raw
        errors.append({"path": path, "message": f"expected a Boolean, got {raw!r}"})
        return None
    try:
        if isinstance(raw, float):
            raise DomainError("decimal values are not accepted; use 'p/q'")
        v = parse_rational(raw)
        if not 0 <= v <= 1:
            raise DomainError(f"{v} outside [0,1]")
        return v
    except DomainError as exc:
        errors.append({"path": path, "message": str(exc)})
        return None


def _parse_monad_value(kind: MonadKind, raw, states, path, errors):
    try:
        if kind.is_distribution:
            if not isinstance(raw, dict):
                raise DomainError("expected an object {state: 'p/q'}")
            weights = {}
            for key, w in raw.items():
                if key in ("*", "⋆"):
                    if kind is not M.DISTBH:
                        raise DomainError("the black hole * is only allowed for dist-bh")
                    key = STAR
                elif key not in states:
                    raise DomainError(f"unknown state {key!r}")
                if isinstance(w, float):
                    raise DomainError("decimal weights are not accepted; use 'p/q'")
                weights[key] = parse_rational(w)
            return M.make(kind, weights)
        if not isinstance(raw, list):
            raise DomainError("expected an array of states")
        for key in raw:
            if key not in states:
                raise DomainError(f"unknown state {key!r}")
        return M.make(kind, raw)
    except DomainError as exc:
        errors.append({"path": path, "message": str(exc)})
        return None


def machine_from_json(doc: Mapping) -> Machine:
    """Validate and build a machine; all problems are reported together."""
    errors: list[dict] = []
    if not isinstance(doc, Mapping):
        raise MachineFormatError([{"path": "$", "message": "document must be an object"}])
    for key in ("quantale", "monad", "alphabet", "states", "out", "trans"):
        if key not in doc:
            errors.append({"path": f"$.{key}", "message": "missing"})
    if errors:
        raise MachineFormatError(errors)
    monad_name, quantale_name = doc["monad"], doc["quantale"]
    if PRESET_QUANTALE.get(monad_name) != quantale_name:
        raise MachineFormatError([{"path": "$.monad",
                                   "message": f"unsupported combination {monad_name}/{quantale_name}"}])
    try:
        sig = preset(monad_name, doc["alphabet"])
    except DomainError as exc:
        raise MachineFormatError([{"path": "$.alphabet", "message": str(exc)}]) from None
    states = doc["states"]
    if not isinstance(states, list) or not states or not all(isinstance(s, str) for s in states):
        raise MachineFormatError([{"path": "$.states", "message": "expected a nonempty array of names"}])
    if len(set(states)) != len(states):
        errors.append({"path": "$.states", "message": "duplicate state names"})
    out, trans = {}, {}
    for x in states:
        if x not in doc["out"]:
            errors.append({"path": f"$.out.{x}", "message": "missing"})
        else:
            out[x] = _parse_out(sig, doc["out"][x], f"$.out.{x}", errors)
        row = doc["trans"].get(x, {})
        for a in sig.alphabet:
            path = f"$.trans.{x}.{a}"
            if a not in row:
                errors.append({"path": path, "message": "missing"})
                continue
            trans[x, a] = _parse_monad_value(sig.kind, row[a], set(states), path, errors)
    if errors:
        raise MachineFormatError(errors)
    return Machine(sig, tuple(states), out, trans)


def machine_to_json(m: Machine) -> dict:
    return {
        "quantale": m.signature.quantale.name,
        "monad": m.kind.value,
        "alphabet": list(m.alphabet),
        "states": list(m.states),
        "out": {x: _value_json(m.out[x]) for x in m.states},
        "trans": {x: {a: monad_value_to_json(m.trans[x, a]) for a in m.alphabet} for x in m.states},
    }


def load_machine(path) -> Machine:
    with open(path) as fh:
        return machine_from_json(json.load(fh))


def parse_state_value(m: Machine, raw: Any) -> MonadValue:
    """A determinized state given as JSON (array or weight object)."""
    errors: list = []
    value = _parse_monad_value(m.kind, raw, set(m.states), "$", errors)
    if errors:
        raise MachineFormatError(errors)
    return value
