"""Why formulas must have uniform depth.

Pairs of successors, sets of branches: the graded semantics only records
whether the complete binary tree of depth n can be executed.  States x and
y agree on that for every n, yet a formula mixing depths tells them apart.
"""
from gradedem.expressivity import TOP, TREE_COALGEBRA, appendix_counterexample, dia, tree_eval

c = TREE_COALGEBRA
print("coalgebra:", c)
mixed = dia(dia(TOP, TOP), TOP)
uniform = dia(dia(TOP, TOP), dia(TOP, TOP))
for phi in (mixed, uniform):
    print(f"{str(phi):24} depth {phi.depth()}: x={tree_eval(c, phi, 'x')} y={tree_eval(c, phi, 'y')}")

report = appendix_counterexample()
print("\n".join(report.summary_lines()))
print(report.breakdown)
