"""Branching as a monad, and distances between distributions.

Four kinds of branching are supported.  The black-hole variant collapses
any distribution that puts positive mass on the adjoined outcome ``*``.
"""
from fractions import Fraction as F

from gradedem import monad as M
from gradedem.quantale import UNIT
from gradedem.vcat import FinVCat

half = M.dist({"a": F(1, 2), "b": F(1, 2)})
print("mixture:", M.mult(M.DIST, M.dist({half: F(1, 2), M.unit(M.DIST, "a"): F(1, 2)})))
print("black hole:", M.bh_flatten({"x": F(1, 2), M.STAR: F(1, 2)}))

# Algebras on the truth values: join for sets, expectation for distributions.
print("o_join{F, T} =", M.o_join()(M.nonempty([False, True])))
print("E[0 or 1]   =", M.o_expect()(M.dist({F(0): F(1, 2), F(1): F(1, 2)})))
print("E with a stuck branch =", M.o_expect_bh()(M.bh_flatten({F(1): F(3, 4), M.STUCK: F(1, 4)})))

for kind in M.MonadKind:
    report = M.check_monad_and_algebra_laws(kind, [("x",), ("x", "y")], [M.standard_algebra(kind)])
    print(kind.value, "laws:", "pass" if report.passed else report.witness)

# Kantorovich distance: cheapest way to move one distribution onto another.
d = {("a", "b"): F(1, 2), ("a", "c"): F(1), ("b", "c"): F(1, 2)}
space = FinVCat.from_function(UNIT, "abc", lambda x, y: F(0) if x == y else d.get((x, y), d.get((y, x))))
mu = M.dist({"a": F(1, 2), "c": F(1, 2)})
print("K(mu, delta_b) =", M.kantorovich(space, mu, M.unit(M.DIST, "b")))
