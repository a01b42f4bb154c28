from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from gradedem import monad as M
from gradedem.expressivity import random_machine
from gradedem.graded import Explorer
from gradedem.logic import (AND, MUL, NEG, OR, Logic, ModalApp, PropApp, StateEvaluator,
                            TruthConst, check_modality, check_prop_op, convex, eval_on_behaviour,
                            eval_state, format_formula, literal_black_hole_modalities,
                            logical_distance, parse_formula, propositional_fragment,
                            squaring_modality, uniform_depth, word_fragment)
from gradedem.machine import build, preset
from gradedem.monad import STAR, STUCK
from gradedem.reports import DomainError, SignatureError

P = parse_formula


def test_uniform_depth():
    assert uniform_depth(P("<T>")) == 1
    assert uniform_depth(P("<a><b><T>")) == 3
    assert uniform_depth(P("<a>or(<T>,const(T))")) is None
    assert uniform_depth(P("const(T)")) == 0
    assert uniform_depth(P("cc(1/2,<a><T>,<b><T>)")) == 2


@pytest.mark.parametrize("text", ["<T>", "<a><b><T>", "<~a>", "const(T)", "neg(<a><T>)",
                                  "or(<a>const(T),<b>const(T))", "cc(3/8,<T>,neg(<T>))",
                                  "and(<T>,mul(<T>,<T>))"])
def test_parser_round_trip(text):
    phi = P(text)
    assert format_formula(phi) == text
    assert P(format_formula(phi)) == phi


@pytest.mark.parametrize("text", ["<a", "or(<T>)", "cc(0.5,<T>,<T>)", "<T> <T>", "foo(<T>)"])
def test_parser_errors(text):
    with pytest.raises(DomainError):
        P(text)


formulas = st.recursive(
    st.sampled_from([P("<T>"), P("const(T)"), P("<~a>")]),
    lambda sub: st.one_of(
        st.builds(lambda a, f: ModalApp(a, (f,)), st.sampled_from("ab"), sub),
        st.builds(lambda f: PropApp(NEG, (f,)), sub),
        st.builds(lambda f, g: PropApp(OR, (f, g)), sub, sub),
        st.builds(lambda p, f, g: PropApp(convex(p), (f, g)),
                  st.fractions(0, 1, max_denominator=16), sub, sub)),
    max_leaves=8)


@given(formulas)
def test_parser_round_trip_property(phi):
    assert P(format_formula(phi)) == phi


def test_eval_examples():
    pa = build(preset("dist", ("a",)), {"x": F(1, 2), "y": F(1)},
               {"x": {"a": {"x": F(1, 2), "y": F(1, 2)}}, "y": {"a": {"y": 1}}})
    assert eval_state(P("<T>"), pa, "x") == F(1, 2)
    assert eval_state(P("<a><T>"), pa, "x") == F(3, 4)
    assert eval_state(P("neg(<T>)"), pa, "x") == F(1, 2)
    with pytest.raises(SignatureError):
        eval_state(P("<~a>"), pa, "x")
    with pytest.raises(SignatureError):
        eval_state(P("or(<T>,<T>)"), pa, "x")

    nfa = build(preset("nepow", ("a",)), {"p": False, "q": True, "r": False},
                {"p": {"a": {"q", "r"}}, "q": {"a": {"q"}}, "r": {"a": {"r"}}})
    for x in "pqr":
        succ = nfa.trans[x, "a"].items
        assert eval_state(P("<a><T>"), nfa, x) == any(nfa.out[y] for y in succ)

    bh = build(preset("dist-bh", ("a",)), {"x": F(1), "y": F(1, 2)},
               {"x": {"a": {STAR: 1}}, "y": {"a": {"y": 1}}})
    assert eval_state(P("<~a>"), bh, "x") is STUCK
    assert eval_state(P("<~a>"), bh, "y") == 1
    assert eval_state(P("<a><T>"), bh, "x") is STUCK


def test_eval_on_behaviour_examples():
    m = random_machine("dist", n_states=3, seed=4)
    logic = Logic(m.signature)
    t = Explorer(m).behaviour("s0", 3)
    assert eval_on_behaviour(P("<a><b><T>"), t, logic) == t.body["ab"]
    assert eval_on_behaviour(P("neg(<T>)"), t, logic) == 1 - t.body[""]
    with pytest.raises(DomainError):
        eval_on_behaviour(P("<a><b><a><b><T>"), t, logic)

    nfa = build(preset("pow", ("a",)), {"x": True, "y": False}, {"x": {"a": set()}, "y": {"a": {"x"}}})
    nl = Logic(nfa.signature)
    assert eval_on_behaviour(TruthConst(), Explorer(nfa).behaviour("x", 0), nl) is True
    assert eval_on_behaviour(P("<a>const(T)"), Explorer(nfa).behaviour("x", 1), nl) is False


@pytest.mark.parametrize("kind", ["pow", "nepow", "dist", "dist-bh"])
@pytest.mark.parametrize("seed", range(3))
def test_evaluation_factors_through_behaviour(kind, seed):
    m = random_machine(kind, n_states=4, seed=seed)
    ev, ex = StateEvaluator(m), Explorer(m)
    ops = [OR] if m.signature.quantale.name == "bool" else [NEG, convex(F(1, 3))]
    for depth in range(4):
        pool = propositional_fragment(ev.logic, depth, ops, size=8, seed=seed)
        for x in m.states:
            t = ex.behaviour(x, depth)
            for phi in pool:
                assert ev(phi, x) == eval_on_behaviour(phi, t, ev.logic)


def test_word_fragment_shapes():
    assert [format_formula(f) for f in word_fragment(Logic(preset("pow", ("a",))), 1)] == \
        ["<T>", "<a>const(T)"]
    assert word_fragment(Logic(preset("dist")), 0) == []
    bh = [format_formula(f) for f in word_fragment(Logic(preset("dist-bh", ("a",))), 2)]
    assert bh == ["<a><T>", "<a><~a>"]


def test_logical_distance_examples():
    m = build(preset("dist", ("a",)), {"x": F(1, 4), "y": F(3, 4)},
              {"x": {"a": {"x": 1}}, "y": {"a": {"y": 1}}})
    report = logical_distance(m, "x", "y", 3)
    assert report.meet == F(1, 2) and format_formula(report.witnesses[1]) == "<T>"
    assert all(v == 0 for v in logical_distance(m, "x", "x", 3).cumulative)
    with pytest.raises(DomainError):
        logical_distance(m, "x", "y", 2, fragment="everything")

    nfa = build(preset("nepow", ("a", "b")), {"p": True, "q": True, "u": False, "v": False},
                {"p": {"a": {"u"}, "b": {"u"}}, "q": {"a": {"u"}, "b": {"v"}},
                 "u": {"a": {"u"}, "b": {"u"}}, "v": {"a": {"p"}, "b": {"v"}}})
    # languages agree on words shorter than 2
    report = logical_distance(nfa, "p", "q", 4)
    assert report.cumulative[:3] == [True, True, True]


@pytest.mark.parametrize("kind", ["pow", "nepow", "dist", "dist-bh"])
def test_shipped_modalities_are_valid(kind):
    sig = preset(kind)
    for mod in Logic(sig).modalities.values():
        report = check_modality(mod, sig, samples=150)
        assert report.passed, (mod.name, report.witness)


def test_negative_modalities_fail():
    dist = preset("dist")
    report = check_modality(squaring_modality(dist), dist, samples=150)
    assert not report.passed and report.witness["law"] == "homomorphy"
    bh = preset("dist-bh", ("a",))
    for mod in literal_black_hole_modalities(bh):
        assert not check_modality(mod, bh, samples=150).passed


def test_prop_ops():
    assert check_prop_op(OR, M.o_join(M.NEPOW)).passed
    assert check_prop_op(OR, M.o_join(M.POW)).passed
    assert check_prop_op(NEG, M.o_expect()).passed
    assert check_prop_op(convex(F(1, 3)), M.o_expect()).passed
    assert check_prop_op(NEG, M.o_expect_bh()).passed
    mul = check_prop_op(MUL, M.o_expect())
    assert not mul.passed and mul.witness["law"] == "homomorphy"
    assert not check_prop_op(AND, M.o_join(M.NEPOW)).passed
    assert not check_prop_op(OR, M.o_expect()).passed


def test_affine_range_is_enforced():
    with pytest.raises(DomainError):
        convex(F(3, 2))
