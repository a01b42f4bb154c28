"""Truth values and distances.

Two quantales: Booleans under conjunction, and [0,1] under truncated
addition where *smaller numbers are better*.  A finite V-category is a
set with a distance table valued in one of them.
"""
from fractions import Fraction as F

from gradedem.quantale import BOOL, UNIT, check_quantale_laws, dyadic_grid
from gradedem.vcat import VFunctor, is_initial_source, product_power, projections, quantale_object

# In the unit interval the order is reversed: 0 is top, 1 is bottom.
print("7/10 (+) 6/10 =", UNIT.tensor(F(7, 10), F(6, 10)))
print("[3/10, 8/10]  =", UNIT.hom(F(3, 10), F(8, 10)))
print("join {1/2, 1/4} =", UNIT.join([F(1, 2), F(1, 4)]), "(numeric min)")

for q, sample in [(BOOL, [False, True]), (UNIT, dyadic_grid(4))]:
    print("\n".join(check_quantale_laws(q, sample).summary_lines()))

# Sup-distance on pairs is the categorical power; its projections are initial.
grid = quantale_object(UNIT, [F(0), F(1, 4), F(1, 2), F(1)])
pairs = product_power(grid, ("left", "right"))
print("d((0, 1/2), (1/4, 1/4)) =", pairs.d((F(0), F(1, 2)), (F(1, 4), F(1, 4))))
print("projections initial:", is_initial_source(pairs, projections(pairs, grid, ("left", "right")))[0])

# A constant map is nonexpansive but forgets every distance.
const = VFunctor(grid, quantale_object(UNIT, [F(0)]), lambda z: F(0))
ok, witness = is_initial_source(grid, [const])
print("constant map initial:", ok, "| witness:", witness)
