"""Independent reference computations used by the tests.

Nothing here imports the package's semantics code; inputs are plain dicts
and lists, answers are Fractions / bools.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product


# --------------------------------------------------------------------------
# Transportation problem by vertex enumeration


def transport_vertices(supply, demand):
    """All basic feasible plans of the transportation polytope.

    A basis is a spanning tree of the complete bipartite graph on
    rows + columns; the plan on a tree is forced and found by peeling leaves.
    """
    m, n = len(supply), len(demand)
    cells = [(i, j) for i in range(m) for j in range(n)]
    plans = []
    for basis in combinations(cells, m + n - 1):
        if not _is_tree(basis, m, n):
            continue
        plan = _solve_on_tree(basis, supply, demand, m, n)
        if plan is not None:
            plans.append(plan)
    return plans


def _is_tree(edges, m, n):
    parent = list(range(m + n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in edges:
        a, b = find(i), find(m + j)
        if a == b:
            return False
        parent[a] = b
    return True


def _solve_on_tree(edges, supply, demand, m, n):
    rest = {("r", i): Fraction(supply[i]) for i in range(m)}
    rest.update({("c", j): Fraction(demand[j]) for j in range(n)})
    live = set(edges)
    plan = {}
    while live:
        degree = {}
        for i, j in live:
            degree[("r", i)] = degree.get(("r", i), 0) + 1
            degree[("c", j)] = degree.get(("c", j), 0) + 1
        leaf = next(v for v, k in degree.items() if k == 1)
        edge = next(e for e in live if ("r", e[0]) == leaf or ("c", e[1]) == leaf)
        amount = rest[leaf]
        plan[edge] = amount
        rest[("r", edge[0])] -= amount
        rest[("c", edge[1])] -= amount
        live.remove(edge)
    if any(v != 0 for v in rest.values()) or any(v < 0 for v in plan.values()):
        return None
    return plan


def kantorovich_by_vertices(cost, supply, demand):
    """Minimum of sum cost * plan over the vertices of the polytope."""
    best = None
    for plan in transport_vertices(supply, demand):
        value = sum((cost[i][j] * w for (i, j), w in plan.items()), Fraction(0))
        if best is None or value < best:
            best = value
    return best


# --------------------------------------------------------------------------
# Subset construction


def subset_step(out, trans, subset, alphabet):
    """Textbook powerset construction on plain dicts."""
    accepting = any(out[x] for x in subset)
    succ = {a: frozenset().union(*[trans[x][a] for x in subset]) for a in alphabet}
    return accepting, succ


def nfa_word_table(out, trans, start, alphabet, depth):
    """Acceptance and nonemptiness for every word shorter than / of length ``depth``."""
    body, frontier = {}, {}
    for k in range(depth + 1):
        for w in product(alphabet, repeat=k):
            w = "".join(w)
            current = {start}
            for a in w:
                current = set().union(*[trans[x][a] for x in current])
            if k < depth:
                body[w] = any(out[x] for x in current)
            else:
                frontier[w] = bool(current)
    return body, frontier


# --------------------------------------------------------------------------
# Probabilistic automata by matrix products


def matrix(trans, states, letter):
    return [[Fraction(trans[x][letter].get(y, 0)) for y in states] for x in states]


def vec_mat(v, mat):
    return [sum((v[i] * mat[i][j] for i in range(len(v))), Fraction(0)) for j in range(len(mat[0]))]


def pa_word_value(out, trans, states, start, word):
    """``e_start . P_w1 ... P_wk . out`` with exact rationals."""
    v = [Fraction(1) if x == start else Fraction(0) for x in states]
    for a in word:
        v = vec_mat(v, matrix(trans, states, a))
    return sum((v[i] * Fraction(out[x]) for i, x in enumerate(states)), Fraction(0))


STUCK = "stuck"


def bh_word_value(out, trans, states, start, word):
    """Case split for black-hole automata.

    ``trans[x][a]`` maps states and ``"*"`` to weights.  Any positive mass
    on ``*`` along the run makes the whole run stuck.
    """
    v = {start: Fraction(1)}
    for a in word:
        nxt = {}
        for x, p in v.items():
            if p == 0:
                continue
            for y, q in trans[x][a].items():
                q = Fraction(q)
                if q == 0:
                    continue
                if y == "*":
                    return STUCK
                nxt[y] = nxt.get(y, Fraction(0)) + p * q
        v = nxt
    return sum((p * Fraction(out[x]) for x, p in v.items()), Fraction(0))


def bh_alive(trans, start, word):
    """Whether reading ``word`` avoids the black hole."""
    v = {start}
    for a in word:
        nxt = set()
        for x in v:
            for y, q in trans[x][a].items():
                if Fraction(q) > 0:
                    if y == "*":
                        return False
                    nxt.add(y)
        v = nxt
    return True
