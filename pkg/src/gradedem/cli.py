"""Command-line front end.

Exit codes: 0 success, 1 a check or verdict failed, 2 bad input,
3 resource cap exceeded.  ``GRADED_EM_SEED`` sets the default seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import monad as M
from .expressivity import (appendix_counterexample, check_black_hole_separation,
                           check_expressivity, check_invariance, random_machine,
                           separation_suite)
from .graded import Explorer, behavioural_distance, check_graded_monad_laws
from .logic import (AND, MUL, NEG, OR, Logic, StateEvaluator, check_modality, check_prop_op,
                    convex, eval_state, format_formula, literal_black_hole_modalities,
                    logical_distance, parse_formula, squaring_modality)
from .machine import (Machine, MachineFormatError, check_em_law, machine_from_json, preset,
                      parse_state_value, reachable_determinization, swapped_zeta)
from .quantale import BOOL, UNIT, check_quantale_laws, dyadic_grid
from .reports import CheckReport, DomainError, ResourceLimitError, SignatureError, expect_failure

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3
PRESETS = ("pow", "nepow", "dist", "dist-bh")
SUITES = ("quantale", "monad", "em-law", "graded", "modality", "separation",
          "expressivity", "invariance", "appendix")


class InputError(Exception):
    def __init__(self, errors: list[dict]):
        super().__init__(errors)
        self.errors = errors


def default_seed() -> int:
    raw = os.environ.get("GRADED_EM_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError([{"path": "GRADED_EM_SEED", "message": f"not an integer: {raw!r}"}])


# --------------------------------------------------------------------------
# Documents


def load_document(path: str) -> tuple[Machine, dict, list]:
    """Machine plus optional ``formulas`` (name -> text) and ``pairs`` ([x, y] lists)."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError([{"path": path, "message": exc.strerror or str(exc)}]) from None
    except json.JSONDecodeError as exc:
        raise InputError([{"path": "$", "message": f"invalid JSON: {exc}"}]) from None
    try:
        m = machine_from_json(doc)
    except MachineFormatError as exc:
        raise InputError(exc.errors) from None
    errors, formulas, pairs = [], {}, []
    logic = Logic(m.signature)
    for name, text in (doc.get("formulas") or {}).items():
        try:
            phi = parse_formula(text)
            logic.check_formula(phi)
            formulas[name] = phi
        except (DomainError, SignatureError) as exc:
            errors.append({"path": f"$.formulas.{name}", "message": str(exc)})
    for i, pair in enumerate(doc.get("pairs") or []):
        if not (isinstance(pair, list) and len(pair) == 2 and all(p in m.states for p in pair)):
            errors.append({"path": f"$.pairs[{i}]", "message": "expected [state, state]"})
        else:
            pairs.append(tuple(pair))
    if errors:
        raise InputError(errors)
    return m, formulas, pairs


def _state(m: Machine, name: str, flag: str):
    if name not in m.states:
        raise InputError([{"path": flag, "message": f"unknown state {name!r}"}])
    return name


def _emit(args, payload: dict, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print("\n".join(lines))


# --------------------------------------------------------------------------
# Commands


def cmd_check(args) -> int:
    m, formulas, pairs = load_document(args.file)
    payload = {"valid": True, "monad": m.kind.value, "quantale": m.signature.quantale.name,
               "states": len(m.states), "alphabet": list(m.alphabet),
               "formulas": sorted(formulas), "pairs": [list(p) for p in pairs]}
    _emit(args, payload, [f"valid {m.kind.value} machine: {len(m.states)} states, "
                          f"alphabet {','.join(m.alphabet)}"])
    return EXIT_OK


def cmd_distance(args) -> int:
    m, _, _ = load_document(args.file)
    x = _state(m, args.source, "--from")
    y = _state(m, args.target, "--to")
    if args.depth < 1:
        raise InputError([{"path": "--depth", "message": "depth must be at least 1"}])
    q = m.signature.quantale
    explorer = Explorer(m)
    db = behavioural_distance(m, x, y, args.depth, explorer)
    payload = {"from": x, "to": y, "depth": args.depth, "behavioural": db.to_json()}
    header = f"{'depth':>5}  {'d_b':>8}  {'meet':>8}"
    rows = [(n, q.format(db.per_depth[n]), q.format(db.cumulative[n])) for n in range(args.depth + 1)]
    status = EXIT_OK
    verdict = None
    if args.logical:
        seed = args.seed if args.seed is not None else default_seed()
        dl = logical_distance(m, x, y, args.depth, args.fragment, seed=seed)
        payload["logical"] = dl.to_json()
        payload["fragment"] = args.fragment
        header += f"  {'d_L':>8}  {'meet':>8}"
        rows = [r + (q.format(dl.per_depth[n]), q.format(dl.cumulative[n]))
                for n, r in zip(range(args.depth + 1), rows)]
        if args.fragment == "word":
            bad = [n for n in range(args.depth + 1) if db.cumulative[n] != dl.cumulative[n]]
            verdict = (f"EXPRESSIVE up to depth {args.depth}" if not bad
                       else f"NOT EXPRESSIVE: distances differ at depth {bad[0]}")
        else:
            bad = [n for n in range(args.depth + 1) if not q.leq(db.per_depth[n], dl.per_depth[n])]
            verdict = (f"INVARIANT up to depth {args.depth}" if not bad
                       else f"NOT INVARIANT: logical distance exceeds behavioural at depth {bad[0]}")
        payload["verdict"] = verdict
        status = EXIT_FAILED if bad else EXIT_OK
    lines = [header] + ["  ".join(f"{c:>{8 if i else 5}}" for i, c in enumerate(r)) for r in rows]
    lines.append(f"behavioural distance: {q.format(db.meet)}")
    if args.logical:
        lines.append(f"logical distance ({args.fragment}): {q.format(dl.meet)}")
        lines.append(verdict)
    _emit(args, payload, lines)
    return status


def cmd_eval(args) -> int:
    m, _, _ = load_document(args.file)
    x = _state(m, args.state, "--state")
    try:
        phi = parse_formula(args.formula)
        value = eval_state(phi, m, x)
    except (DomainError, SignatureError) as exc:
        raise InputError([{"path": "--formula", "message": str(exc)}]) from None
    text = m.signature.algebra.format(value)
    _emit(args, {"state": x, "formula": format_formula(phi), "value": text}, [text])
    return EXIT_OK


def cmd_determinize(args) -> int:
    m, _, _ = load_document(args.file)
    if args.depth < 0:
        raise InputError([{"path": "--depth", "message": "depth must be nonnegative"}])
    roots = []
    for raw in args.roots:
        if raw in m.states:
            roots.append(M.unit(m.kind, raw))
            continue
        try:
            roots.append(parse_state_value(m, json.loads(raw)))
        except json.JSONDecodeError:
            raise InputError([{"path": "--from", "message": f"not a state or JSON value: {raw!r}"}]) from None
        except MachineFormatError as exc:
            raise InputError([{"path": "--from", "message": e["message"]} for e in exc.errors]) from None
    graph = reachable_determinization(m, roots, args.depth, cap=args.cap)
    doc = graph.to_json()
    lines = []
    for node in doc["nodes"]:
        line = f"{node['id']:>4}  depth {node['depth']}  {json.dumps(node['state'])}"
        if "output" in node:
            succ = " ".join(f"{a}->{t}" for a, t in node["succ"].items())
            line += f"  out={node['output'] if not isinstance(node['output'], bool) else BOOL.format(node['output'])}  {succ}"
        lines.append(line)
    _emit(args, doc, lines)
    return EXIT_OK


# --------------------------------------------------------------------------
# Law suites


def suite_quantale(seed: int) -> CheckReport:
    report = CheckReport("quantale-suite")
    report.add(check_quantale_laws(BOOL, [False, True]))
    report.add(check_quantale_laws(UNIT, dyadic_grid(4)))
    return report


def suite_monad(seed: int) -> CheckReport:
    report = CheckReport("monad-suite")
    carriers = (("x",), ("x", "y"), ("x", "y", "z"))
    for name in PRESETS:
        kind = M.MonadKind(name)
        report.add(M.check_monad_and_algebra_laws(kind, carriers, [M.standard_algebra(kind)], seed))
    return report


def suite_em_law(seed: int) -> CheckReport:
    report = CheckReport("em-law-suite")
    for name in PRESETS:
        sig = preset(name)
        report.add(check_em_law(sig, seed=seed))
        report.add(expect_failure(check_em_law(sig, carriers=(("x", "y"),), zeta=swapped_zeta,
                                               seed=seed), f"letter-swapping law ({name})"))
    return report


def suite_graded(seed: int) -> CheckReport:
    report = CheckReport("graded-suite")
    for name in PRESETS:
        sig = preset(name)
        report.add(check_graded_monad_laws(sig, seed=seed))
        report.add(expect_failure(check_graded_monad_laws(sig, max_depth=1, zeta=swapped_zeta,
                                                          samples=20, seed=seed),
                                  f"letter-swapping law ({name})"))
    return report


def suite_modality(seed: int) -> CheckReport:
    report = CheckReport("modality-suite")
    for name in PRESETS:
        sig = preset(name)
        for mod in Logic(sig).modalities.values():
            report.add(check_modality(mod, sig, seed))
        alg = sig.algebra
        ops = [OR] if sig.quantale is BOOL else [NEG, convex("1/2"), convex("1/4")]
        for op in ops:
            report.add(check_prop_op(op, alg, seed))
    dist, bh, nepow = preset("dist"), preset("dist-bh"), preset("nepow")
    report.add(expect_failure(check_modality(squaring_modality(dist), dist, seed), "squaring"))
    for mod in literal_black_hole_modalities(bh):
        report.add(expect_failure(check_modality(mod, bh, seed), mod.name))
    report.add(expect_failure(check_prop_op(MUL, dist.algebra, seed), "multiplication"))
    report.add(expect_failure(check_prop_op(AND, nepow.algebra, seed), "conjunction"))
    return report


def suite_separation(seed: int) -> CheckReport:
    report = CheckReport("separation-suite")
    for name in PRESETS:
        report.add(separation_suite(preset(name)))
    return report


def _corpus(seed: int, count: int = 4):
    for name in PRESETS:
        depth = 6 if name in ("pow", "nepow") else 4
        for i in range(count):
            yield name, depth, random_machine(name, n_states=4, seed=seed * 1000 + i)


def _pairs(m: Machine):
    return [(x, y) for i, x in enumerate(m.states) for y in m.states[i + 1:]]


def suite_expressivity(seed: int) -> CheckReport:
    report = CheckReport("expressivity-suite", instance="seeded random machines")
    for name, depth, m in _corpus(seed):
        ex, ev = Explorer(m), StateEvaluator(m)
        child = CheckReport("expressivity", instance=f"{name} machine")
        for x, y in _pairs(m):
            child.add(check_expressivity(m, x, y, depth, ex, ev))
            if m.kind is M.DISTBH:
                child.add(check_black_hole_separation(m, x, y, depth, ex, ev))
        child.children = [c for c in child.children if not c.passed]
        report.add(child)
    return report


def suite_invariance(seed: int) -> CheckReport:
    report = CheckReport("invariance-suite", instance="seeded random machines")
    for name, depth, m in _corpus(seed):
        ex, ev = Explorer(m), StateEvaluator(m)
        child = CheckReport("invariance", instance=f"{name} machine")
        for x, y in _pairs(m):
            child.add(check_invariance(m, x, y, depth, seed=seed, explorer=ex, evaluator=ev))
        child.children = [c for c in child.children if not c.passed]
        report.add(child)
    return report


def suite_appendix(seed: int) -> CheckReport:
    return appendix_counterexample()


SUITE_RUNNERS = {
    "quantale": suite_quantale, "monad": suite_monad, "em-law": suite_em_law,
    "graded": suite_graded, "modality": suite_modality, "separation": suite_separation,
    "expressivity": suite_expressivity, "invariance": suite_invariance, "appendix": suite_appendix,
}


def run_suite(name: str, seed: int) -> CheckReport:
    if name == "all":
        report = CheckReport("all-suites", instance=f"seed {seed}")
        for suite in SUITES:
            report.add(SUITE_RUNNERS[suite](seed))
        return report
    return SUITE_RUNNERS[name](seed)


def cmd_laws(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    report = run_suite(args.suite, seed)
    _emit(args, report.to_json(), report.summary_lines())
    return EXIT_OK if report.passed else EXIT_FAILED


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gradedem",
                                     description="Graded semantics, distances and modal logics "
                                                 "for Moore-shaped machines.")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(fn=fn)
        return p

    p = command("check", cmd_check, "validate a machine document")
    p.add_argument("file")

    p = command("distance", cmd_distance, "behavioural (and logical) distance of two states")
    p.add_argument("file")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--logical", action="store_true")
    p.add_argument("--fragment", choices=("word", "propositional"), default="word")
    p.add_argument("--seed", type=int)

    p = command("eval", cmd_eval, "evaluate a formula at a state")
    p.add_argument("file")
    p.add_argument("--state", required=True)
    p.add_argument("--formula", required=True)

    p = command("laws", cmd_laws, "run a law or theorem suite")
    p.add_argument("--suite", choices=SUITES + ("all",), required=True)
    p.add_argument("--seed", type=int)

    p = command("determinize", cmd_determinize, "reachable part of the determinized machine")
    p.add_argument("file")
    p.add_argument("--from", dest="roots", action="append", required=True,
                   help="state name or JSON monad value; repeatable")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--cap", type=int, default=10_000)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(json.dumps({"valid": False, "errors": exc.errors}, indent=2), file=sys.stderr)
        if getattr(args, "json", False) and args.command == "check":
            print(json.dumps({"valid": False, "errors": exc.errors}, indent=2))
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
