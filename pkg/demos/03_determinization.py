"""Determinizing machines with branching.

A machine has an output per state and, per letter, a branching value of
successors.  One determinization step acts on branching values of states:
the subset construction for NFAs, belief propagation for probabilistic
automata.
"""
from fractions import Fraction as F

from gradedem import monad as M
from gradedem.machine import build, det_step, preset, reachable_determinization

nfa = build(preset("pow", ("a", "b")), {"p": False, "q": True},
            {"p": {"a": {"p", "q"}, "b": {"p"}}, "q": {"a": set(), "b": {"q"}}})
print("from {p, q}:", det_step(nfa, M.powerset("pq")))

graph = reachable_determinization(nfa, [M.unit(M.POW, "p")], depth=3)
for node in graph.to_json()["nodes"]:
    print(node)

pa = build(preset("dist", ("a",)), {"q0": F(0), "q1": F(1), "q2": F(1, 2)},
           {"q0": {"a": {"q1": F(1, 2), "q2": F(1, 2)}},
            "q1": {"a": {"q1": 1}}, "q2": {"a": {"q0": 1}}})
belief = M.unit(M.DIST, "q0")
for step in range(4):
    out, succ = det_step(pa, belief)
    print(f"step {step}: belief {belief}, expected output {out}")
    belief = succ["a"]

bh = build(preset("dist-bh", ("a",)), {"x": F(1)}, {"x": {"a": {"x": F(3, 4), M.STAR: F(1, 4)}}})
print("black hole:", det_step(bh, M.unit(M.DISTBH, "x")))
