"""Finite-depth behaviours and behavioural distance.

The depth-n behaviour of a state is a table of outputs indexed by words
shorter than n.  For sets and black holes it also records, for each word
of length n, whether the word can be executed at all.
"""
from fractions import Fraction as F

from gradedem.graded import behavioural_distance, em_project, n_step_behaviour
from gradedem.machine import build, preset

pa = build(preset("dist", ("a",)), {"x": F(1, 4), "y": F(3, 4)},
           {"x": {"a": {"x": 1}}, "y": {"a": {"y": 1}}})
print(n_step_behaviour(pa, "x", 3).to_json())
print("d_b per depth:", behavioural_distance(pa, "x", "y", 4).to_json())

# Two silent NFA states: x can read "a" forever, y deadlocks at once.
nfa = build(preset("pow", ("a",)), {"x": False, "y": False, "z": False},
            {"x": {"a": {"z"}}, "y": {"a": set()}, "z": {"a": {"z"}}})
tx, ty = n_step_behaviour(nfa, "x", 2), n_step_behaviour(nfa, "y", 2)
print("x:", tx.to_json())
print("y:", ty.to_json())
print("same language tables:", em_project(tx) == em_project(ty), "| same behaviour:", tx == ty)
