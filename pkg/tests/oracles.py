"""Brute-force reference implementations shared by the test modules.

None of these go through the semilinear or cone conversion code: cone
membership is an exact solve over independent generator subsets,
lattice membership an integer solve, and linear sets are enumerated by
closing a base point under generator addition inside a box.
"""

import itertools
from fractions import Fraction

from hypothesis import strategies as st

from vasgeo.exactla import int_solve, transpose
from vasgeo.periodic import GeneratorPeriodic, fill
from vasgeo.semilinear import LinearSet


def box(n, bound):
    return itertools.product(range(bound + 1), repeat=n)


def _solve_exact(cols, x):
    """Unique c with sum c_i cols_i = x for independent cols, else None."""
    k = len(cols)
    rows = [[Fraction(c[i]) for c in cols] + [Fraction(x[i])] for i in range(len(x))]
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            return None
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    if any(row[k] != 0 for row in rows[r:]):
        return None
    return [rows[i][k] / rows[i][i] for i in range(k)]


def in_cone(gens, x):
    """Caratheodory: x is a non-negative combination of some independent subset."""
    if not any(x):
        return True
    gens = [tuple(g) for g in gens]
    for k in range(1, min(len(gens), len(x)) + 1):
        for sub in itertools.combinations(gens, k):
            c = _solve_exact(sub, x)
            if c is not None and min(c) >= 0:
                return True
    return False


def in_lattice(gens, x):
    if not gens:
        return not any(x)
    return int_solve(transpose([list(g) for g in gens]), list(x)) is not None


def in_fill(gens, x):
    return in_lattice(gens, x) and in_cone(gens, x)


def in_linear(base, gens, x):
    y = tuple(a - b for a, b in zip(x, base))
    # non-negative generators: cheap necessary conditions before the LP
    if min(y, default=0) < 0:
        return False
    if any(v and not any(g[i] for g in gens) for i, v in enumerate(y)):
        return False
    return in_fill(gens, y)


def star(gens, n, bound, start=None):
    start = tuple(start) if start is not None else (0,) * n
    if max(start, default=0) > bound:
        return set()
    seen = {start}
    todo = [start]
    while todo:
        x = todo.pop()
        for g in gens:
            y = tuple(a + b for a, b in zip(x, g))
            if max(y) <= bound and y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def affine_rank(points):
    """Dimension of the affine hull of a finite point set (-1 if empty)."""
    pts = list(points)
    if not pts:
        return -1
    p0 = pts[0]
    rows = [[Fraction(a - b) for a, b in zip(p, p0)] for p in pts[1:]]
    r = 0
    ncols = len(p0)
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c] / rows[r][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    return r


@st.composite
def linear_sets(draw, max_dim=3, max_entry=4, max_gens=3):
    n = draw(st.integers(1, max_dim))
    vec = st.lists(st.integers(0, max_entry), min_size=n, max_size=n).map(tuple)
    base = draw(vec)
    gens = draw(st.lists(vec, min_size=0, max_size=max_gens))
    gens = [g for g in gens if any(g)]
    return LinearSet(base, fill(GeneratorPeriodic.make(n, gens))), base, gens


@st.composite
def linear_pairs(draw, max_dim=3, max_entry=4):
    n = draw(st.integers(1, max_dim))
    vec = st.lists(st.integers(0, max_entry), min_size=n, max_size=n).map(tuple)

    def one():
        base = draw(vec)
        gens = [g for g in draw(st.lists(vec, min_size=0, max_size=3)) if any(g)]
        return LinearSet(base, fill(GeneratorPeriodic.make(n, gens))), base, gens

    return n, one(), one()
