"""Modal formulas, their semantics, and which operators are allowed.

``<T>`` reads the output, ``<a>phi`` reads letter a and evaluates phi on
the successors through the algebra.  An operator is admissible when it
commutes with the algebra; the checks below test exactly that.
"""
from fractions import Fraction as F

from gradedem import monad as M
from gradedem.graded import n_step_behaviour
from gradedem.logic import (MUL, NEG, Logic, check_modality, check_prop_op, eval_on_behaviour,
                            eval_state, logical_distance, parse_formula, squaring_modality,
                            uniform_depth)
from gradedem.machine import build, preset

pa = build(preset("dist", ("a",)), {"x": F(1, 2), "y": F(1)},
           {"x": {"a": {"x": F(1, 2), "y": F(1, 2)}}, "y": {"a": {"y": 1}}})
for text in ["<T>", "<a><T>", "<a><a><T>", "neg(<a><T>)", "cc(1/4,<a><T>,neg(<a><T>))"]:
    phi = parse_formula(text)
    value = eval_state(phi, pa, "x")
    # the same value can be read off the finite behaviour alone
    table = n_step_behaviour(pa, "x", uniform_depth(phi))
    assert value == eval_on_behaviour(phi, table, Logic(pa.signature))
    print(f"{text:28} at x = {value}")

print(logical_distance(pa, "x", "y", 3).to_json())

sig = preset("dist")
print("<a> valid:", check_modality(Logic(sig).modalities["a"], sig).passed)
squaring = check_modality(squaring_modality(sig), sig)
print("squaring valid:", squaring.passed, "| witness:", squaring.witness["witness"]["lhs"],
      "vs", squaring.witness["witness"]["rhs"])
print("negation valid:", check_prop_op(NEG, M.o_expect()).passed)
print("product valid:", check_prop_op(MUL, M.o_expect()).passed)
