import json
from fractions import Fraction as F

import pytest

from gradedem import monad as M
from gradedem.expressivity import (TOP, appendix_counterexample, check_black_hole_separation,
                                   check_depth1_separation_F, check_expressivity, check_invariance,
                                   dia, random_machine, separation_instances, separation_suite,
                                   tree_eval, tree_executable, TREE_COALGEBRA)
from gradedem.logic import MUL, NEG, OR, convex
from gradedem.machine import build, machine_to_json, preset
from gradedem.monad import STAR
from gradedem.reports import DomainError


def test_random_machine_is_deterministic():
    a = random_machine("nepow", "bool", 3, ("a", "b"), seed=7)
    b = random_machine("nepow", "bool", 3, ("a", "b"), seed=7)
    assert machine_to_json(a) == machine_to_json(b)
    assert all(not t.is_empty for t in a.trans.values())


def test_random_dist_weights_are_dyadic():
    m = random_machine("dist", "unit", 2, ("a",), seed=1)
    for t in m.trans.values():
        assert sum(t.weights().values()) == 1
        assert all((w * 4).denominator == 1 for w in t.weights().values())


def test_random_machine_coverage():
    assert any(t.is_empty for s in range(20)
               for t in random_machine("pow", "bool", 2, ("a",), seed=s).trans.values())
    assert any(t.is_star for s in range(20)
               for t in random_machine("dist-bh", n_states=2, seed=s).trans.values())
    with pytest.raises(DomainError):
        random_machine("dist", "bool")


@pytest.mark.parametrize("kind", ["pow", "dist"])
def test_separation_instances(kind):
    sig = preset(kind)
    for label, a0, family, expected in separation_instances(sig):
        report = check_depth1_separation_F(sig, a0, family, label)
        assert report.passed == expected, label
        if not expected:
            assert set(report.witness["witness"]) == {"x", "y", "distance", "meet_over_maps"}
    assert separation_suite(sig).passed


@pytest.mark.parametrize("kind, depth", [("pow", 6), ("nepow", 6), ("dist", 4), ("dist-bh", 4)])
@pytest.mark.parametrize("seed", range(3))
def test_expressivity_and_invariance(kind, depth, seed):
    m = random_machine(kind, n_states=4, seed=seed)
    for x in m.states:
        for y in m.states:
            ex = check_expressivity(m, x, y, depth)
            assert ex.passed, ex.witness
            inv = check_invariance(m, x, y, depth, seed=seed)
            assert inv.passed, inv.witness


def test_invariance_refuses_invalid_operators():
    m = random_machine("dist", n_states=2, seed=0)
    with pytest.raises(DomainError):
        check_invariance(m, "s0", "s1", 2, prop_ops=[MUL])
    assert check_invariance(m, "s0", "s1", 2, prop_ops=[]).passed
    assert check_invariance(m, "s0", "s1", 3, prop_ops=[NEG, convex(F(1, 2))]).passed


def test_executability_is_observable_at_depth_one():
    m = build(preset("pow", ("a",)), {"x": False, "y": False, "z": False},
              {"x": {"a": {"z"}}, "y": {"a": set()}, "z": {"a": {"z"}}})
    report = check_expressivity(m, "x", "y", 2)
    assert report.passed
    assert report.breakdown["logical"] == ["T", "F", "F"]
    assert report.breakdown["behavioural"] == ["T", "F", "F"]


def test_black_hole_separation():
    m = build(preset("dist-bh", ("a",)), {"x": F(1), "y": F(1), "z": F(1)},
              {"x": {"a": {"x": F(1, 2), STAR: F(1, 2)}}, "y": {"a": {"y": 1}},
               "z": {"a": {"z": 1}}})
    sep = check_black_hole_separation(m, "x", "y", 1)
    assert sep.passed and sep.breakdown["formula"] == "<~a>"
    same = check_black_hole_separation(m, "y", "z", 3)
    assert same.passed and same.breakdown["equal_behaviours"]
    with pytest.raises(DomainError):
        check_black_hole_separation(random_machine("dist", n_states=2), "s0", "s1", 2)


def test_tree_counterexample_parts():
    c = TREE_COALGEBRA
    assert [tree_executable(c, "x", n) for n in range(4)] == [True, True, False, False]
    assert [tree_executable(c, "y", n) for n in range(4)] == [True, True, False, False]
    assert tree_eval(c, dia(dia(TOP, TOP), TOP), "x") is False
    assert tree_eval(c, dia(dia(TOP, TOP), TOP), "y") is True
    uniform = dia(dia(TOP, TOP), dia(TOP, TOP))
    assert tree_eval(c, uniform, "x") == tree_eval(c, uniform, "y") is False
    assert dia(dia(TOP, TOP), TOP).depth() is None and uniform.depth() == 2


def test_appendix_report():
    report = appendix_counterexample()
    assert report.passed
    assert report.breakdown["non_uniform"] == {"formula": "dia(dia(T,T),T)", "x": False, "y": True}
    json.dumps(report.to_json())


def test_failure_reports_are_replayable():
    sig = preset("dist")
    label, a0, family, _ = separation_instances(sig)[-1]
    first = check_depth1_separation_F(sig, a0, family, label)
    second = check_depth1_separation_F(sig, a0, family, label)
    assert not first.passed and first.to_json() == second.to_json()
