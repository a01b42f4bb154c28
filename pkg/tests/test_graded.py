from fractions import Fraction as F

import pytest

from gradedem import monad as M
from gradedem.expressivity import random_machine
from gradedem.graded import (WordTable, behavioural_distance, check_graded_monad_laws, em_project,
                             n_step_behaviour, table_distance, words_upto)
from gradedem.machine import build, machine_to_json, preset, swapped_zeta
from gradedem.reports import DomainError

from oracles import bh_alive, bh_word_value, nfa_word_table, pa_word_value


def test_depth_zero_affine_table_is_empty():
    m = random_machine("dist", n_states=2, alphabet=("a",), seed=1)
    t = n_step_behaviour(m, "s0", 0)
    assert t == WordTable(0, {}, None)


def test_single_state_pa():
    m = build(preset("dist", ("a",)), {"q": F(1, 2)}, {"q": {"a": {"q": 1}}})
    t = n_step_behaviour(m, "q", 2)
    assert dict(t.body) == {"": F(1, 2), "a": F(1, 2)} and t.frontier is None


def test_frontier_marks_deadlocks():
    m = build(preset("pow", ("a", "b")), {"x": True, "y": False},
              {"x": {"a": {"y"}, "b": set()}, "y": {"a": set(), "b": {"x"}}})
    t = n_step_behaviour(m, "x", 2)
    assert dict(t.frontier) == {"aa": False, "ab": True, "ba": False, "bb": False}
    assert dict(t.body) == {"": True, "a": False, "b": False}


def test_em_projection_erases_executability():
    sig = preset("pow", ("a",))
    m = build(sig, {"x": False, "y": False, "z": False},
              {"x": {"a": {"z"}}, "y": {"a": set()}, "z": {"a": {"z"}}})
    tx, ty = n_step_behaviour(m, "x", 2), n_step_behaviour(m, "y", 2)
    assert tx != ty
    assert em_project(tx) == em_project(ty)
    assert table_distance(sig, tx, ty) is False


def test_behavioural_distance_examples():
    m = build(preset("dist", ("a",)), {"x": F(1, 4), "y": F(3, 4)},
              {"x": {"a": {"x": 1}}, "y": {"a": {"y": 1}}})
    report = behavioural_distance(m, "x", "y", 4)
    assert report.per_depth == [0, F(1, 2), F(1, 2), F(1, 2), F(1, 2)]
    assert report.meet == F(1, 2)
    assert behavioural_distance(m, "x", "x", 3).meet == 0

    # languages first differ at the word "ab"
    nfa = build(preset("nepow", ("a", "b")), {"p": False, "q": False, "r": False, "s": True, "u": False},
                {"p": {"a": {"q"}, "b": {"u"}}, "q": {"a": {"u"}, "b": {"s"}},
                 "r": {"a": {"u"}, "b": {"u"}}, "s": {"a": {"u"}, "b": {"u"}},
                 "u": {"a": {"u"}, "b": {"u"}}})
    report = behavioural_distance(nfa, "p", "r", 4)
    assert report.cumulative == [True, True, True, False, False]


def test_truncation_rules():
    m = random_machine("pow", n_states=3, seed=5)
    t = n_step_behaviour(m, "s0", 3)
    with pytest.raises(DomainError):
        t.truncate(2)
    d = random_machine("dist", n_states=3, seed=5)
    assert n_step_behaviour(d, "s0", 4).truncate(2) == n_step_behaviour(d, "s0", 2)


def _plain(m):
    doc = machine_to_json(m)
    return doc["out"], doc["trans"], doc["states"], doc["alphabet"]


@pytest.mark.parametrize("seed", range(8))
def test_pow_tables_match_set_oracle(seed):
    m = random_machine("pow", n_states=4, seed=seed)
    out, trans, states, alphabet = _plain(m)
    trans = {x: {a: set(v) for a, v in row.items()} for x, row in trans.items()}
    for x in states:
        t = n_step_behaviour(m, x, 4)
        body, frontier = nfa_word_table(out, trans, x, alphabet, 4)
        assert dict(t.body) == body and dict(t.frontier) == frontier


@pytest.mark.parametrize("seed", range(8))
def test_dist_tables_match_matrix_oracle(seed):
    m = random_machine("dist", n_states=4, seed=seed)
    out, trans, states, alphabet = _plain(m)
    for x in states:
        t = n_step_behaviour(m, x, 4)
        for w in words_upto(alphabet, 4):
            assert t.body[w] == pa_word_value(out, trans, states, x, w)


@pytest.mark.parametrize("seed", range(8))
def test_black_hole_tables_match_case_split(seed):
    m = random_machine("dist-bh", n_states=4, seed=seed, star_probability=0.3)
    out, trans, states, alphabet = _plain(m)
    for x in states:
        t = n_step_behaviour(m, x, 3)
        for w in words_upto(alphabet, 3):
            expected = bh_word_value(out, trans, states, x, w)
            assert (t.body[w] is M.STUCK) if expected == "stuck" else t.body[w] == expected
        for w, bit in t.frontier.items():
            assert bit == bh_alive(trans, x, w)


@pytest.mark.parametrize("name", ["pow", "nepow", "dist", "dist-bh"])
def test_graded_laws(name):
    report = check_graded_monad_laws(preset(name), samples=25, seed=2)
    assert report.passed, report.witness


def test_graded_laws_catch_wrong_wiring():
    report = check_graded_monad_laws(preset("nepow"), zeta=swapped_zeta, samples=20)
    assert not report.passed
    assert "associativity" in {f["law"] for f in report.failures}
