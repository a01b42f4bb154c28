from fractions import Fraction as F

from gradedem.quantale import BOOL, UNIT
from gradedem.vcat import (FinVCat, VFunctor, check_vcat, is_initial_source, make_discrete,
                           product_power, projections, quantale_object)


def test_discrete_spaces():
    d3 = make_discrete(BOOL, "xyz")
    assert d3.d("x", "x") is True and d3.d("x", "y") is False
    d2 = make_discrete(UNIT, "xy")
    assert d2.d("x", "y") == 1 and d2.d("x", "x") == 0
    assert make_discrete(UNIT, "p").d("p", "p") == UNIT.unit
    assert check_vcat(d3).passed


def test_product_power_distances():
    base = quantale_object(UNIT, [F(0), F(1, 4), F(1, 2), F(1)])
    power = product_power(base, ("i", "j"))
    assert power.d((F(0), F(1, 2)), (F(1, 4), F(1, 4))) == F(1, 4)
    pair = product_power(make_discrete(BOOL, "xy"), ("i", "j"))
    assert pair.d(("x", "y"), ("x", "y")) is True
    assert pair.d(("x", "y"), ("x", "x")) is False
    empty = product_power(base, ())
    assert empty.points == ((),) and empty.d((), ()) == UNIT.top


def test_initial_sources():
    base = quantale_object(UNIT, [F(0), F(1, 2), F(1)])
    ident = VFunctor(base, base, lambda z: z, "id")
    assert is_initial_source(base, [ident]) == (True, None)
    ok, witness = is_initial_source(base, [])
    assert not ok and witness[2] != witness[3]
    single = make_discrete(UNIT, "p")
    assert is_initial_source(single, [])[0]
    three = quantale_object(UNIT, [F(0), F(1, 4), F(1)])
    power = product_power(three, ("i", "j"))
    assert is_initial_source(power, projections(power, three, ("i", "j")))[0]


def test_triangle_violation_and_symmetrized_grid():
    table = {}
    for x in "xyz":
        for y in "xyz":
            table[x, y] = F(0) if x == y else F(1)
    table["x", "y"] = table["y", "x"] = F(0)
    table["y", "z"] = table["z", "y"] = F(0)
    bad = FinVCat(UNIT, ("x", "y", "z"), table)
    report = check_vcat(bad)
    assert not report.passed and report.failures[0]["law"] == "triangle"
    assert check_vcat(quantale_object(UNIT, [F(0), F(1, 2), F(1)])).passed
