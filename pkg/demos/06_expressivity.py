"""Behavioural distance equals logical distance.

For random machines of every kind the distance computed from behaviours
matches the distance computed from word formulas, depth by depth.  For the
black-hole kind the word formulas ending in ``<~a>`` are what tell apart
states whose runs fall into the black hole.
"""
from gradedem.expressivity import (check_black_hole_separation, check_expressivity,
                                   check_invariance, random_machine)
from gradedem.graded import Explorer
from gradedem.logic import StateEvaluator

for kind, depth in [("pow", 6), ("nepow", 6), ("dist", 4), ("dist-bh", 4)]:
    m = random_machine(kind, n_states=4, seed=3)
    ex, ev = Explorer(m), StateEvaluator(m)
    x, y = m.states[0], m.states[1]
    report = check_expressivity(m, x, y, depth, ex, ev)
    print(f"{kind:8} d_b {report.breakdown['behavioural']}  d_L {report.breakdown['logical']}")
    print(f"{'':8} invariance over propositional closure:",
          check_invariance(m, x, y, depth, explorer=ex, evaluator=ev).passed)
    if kind == "dist-bh":
        for a, b in [(x, y), (m.states[2], m.states[3])]:
            sep = check_black_hole_separation(m, a, b, depth, ex, ev)
            print(f"{'':8} {a} vs {b}: separating formula {sep.breakdown['formula']}")
