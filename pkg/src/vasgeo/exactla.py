"""Exact rational and integer linear algebra.

Matrices are row-major sequences of rows holding ``int`` or ``Fraction``.
Nothing in this module rounds; every result is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

Vec = tuple
Matrix = Sequence[Sequence]

FM_MAX_DIM = 8


class BudgetExceeded(Exception):
    """Raised when a bounded search runs out of steps.

    ``partial`` carries whatever was found before the budget ran out.
    """

    def __init__(self, partial=None, expended: int = 0):
        super().__init__(f"budget exceeded after {expended} steps")
        self.partial = partial
        self.expended = expended


# --- rationals -------------------------------------------------------------

def to_rat(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, bool):
        raise TypeError("bool is not a rational")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        s = v.strip()
        if not s or " " in s:
            raise ValueError(f"bad rational {v!r}")
        return Fraction(s)
    raise TypeError(f"cannot read {type(v).__name__} as a rational")


def rat_str(q) -> object:
    """Canonical JSON form: bare int when integral, else "num/den"."""
    q = to_rat(q)
    if q.denominator == 1:
        return q.numerator
    return f"{q.numerator}/{q.denominator}"


def ivec(v: Iterable) -> Vec:
    out = []
    for a in v:
        a = to_rat(a)
        if a.denominator != 1:
            raise ValueError(f"non-integer entry {a}")
        out.append(a.numerator)
    return tuple(out)


def qvec(v: Iterable) -> Vec:
    return tuple(to_rat(a) for a in v)


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), 0)


def vadd(a: Sequence, b: Sequence) -> Vec:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Sequence, b: Sequence) -> Vec:
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a: Sequence) -> Vec:
    return tuple(c * x for x in a)


def zero(n: int) -> Vec:
    return (0,) * n


def unit(n: int, i: int) -> Vec:
    return tuple(1 if j == i else 0 for j in range(n))


def primitive(v: Sequence) -> Vec:
    """Scale a rational vector to the primitive integer vector on its ray."""
    v = qvec(v)
    den = 1
    for a in v:
        den = den * a.denominator // gcd(den, a.denominator)
    w = [int(a * den) for a in v]
    g = 0
    for a in w:
        g = gcd(g, a)
    if g == 0:
        return tuple(w)
    return tuple(a // g for a in w)


def leq(a: Sequence, b: Sequence) -> bool:
    return all(x <= y for x, y in zip(a, b))


def transpose(m: Matrix, ncols: Optional[int] = None) -> list:
    if not m:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*m)]


def matmul(a: Matrix, b: Matrix) -> list:
    bt = transpose(b)
    return [[dot(row, col) for col in bt] for row in a]


def matvec(m: Matrix, v: Sequence) -> Vec:
    return tuple(dot(row, v) for row in m)


def identity(n: int) -> list:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


# --- Gaussian elimination -------------------------------------------------

def rref(m: Matrix) -> tuple[list, list]:
    """Reduced row echelon form over Q. Returns (rows, pivot columns)."""
    a = [[to_rat(x) for x in row] for row in m]
    if not a:
        return [], []
    nr, nc = len(a), len(a[0])
    pivots = []
    r = 0
    for c in range(nc):
        p = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(nr):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return a[:r], pivots


def rank(m: Matrix) -> int:
    """Rank over Q."""
    return len(rref(m)[1])


def kernel(m: Matrix, ncols: Optional[int] = None) -> list:
    """Primitive integer basis of the rational null space of ``m``."""
    if not m:
        return [unit(ncols or 0, i) for i in range(ncols or 0)]
    nc = len(m[0])
    rows, piv = rref(m)
    free = [c for c in range(nc) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * nc
        v[f] = Fraction(1)
        for row, p in zip(rows, piv):
            v[p] = -row[f]
        basis.append(primitive(v))
    return basis


def solve(m: Matrix, rhs: Sequence) -> Optional[Vec]:
    """Some rational solution of m·x = rhs, or None."""
    if not m:
        return None if any(rhs) else ()
    nc = len(m[0])
    aug = [list(row) + [r] for row, r in zip(m, rhs)]
    rows, piv = rref(aug)
    if nc in piv:
        return None
    x = [Fraction(0)] * nc
    for row, p in zip(rows, piv):
        x[p] = row[nc]
    return tuple(x)


def in_span(gens: Sequence[Sequence], v: Sequence) -> bool:
    if not gens:
        return not any(v)
    return solve(transpose(gens), v) is not None


def independent_subset(vecs: Sequence[Sequence]) -> list:
    """Indices of a maximal linearly independent prefix-greedy subset."""
    chosen: list = []
    rows: list = []
    for i, v in enumerate(vecs):
        if rank(rows + [list(v)]) > len(rows):
            rows.append(list(v))
            chosen.append(i)
    return chosen


def det(m: Matrix):
    a = [[to_rat(x) for x in row] for row in m]
    n = len(a)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


# --- Hermite and Smith normal forms ----------------------------------------

def hnf(m: Matrix) -> tuple[list, list]:
    """Column-style Hermite normal form.

    Returns (H, U) with H = M·U, U unimodular. H is in column echelon form:
    the nonzero columns come first, each has a positive pivot strictly below
    the previous one, and entries left of a pivot in its row are reduced
    into [0, pivot).
    """
    nr = len(m)
    nc = len(m[0]) if m else 0
    h = [[int(x) for x in row] for row in m]
    u = identity(nc)

    def colop_swap(i, j):
        for row in h:
            row[i], row[j] = row[j], row[i]
        for row in u:
            row[i], row[j] = row[j], row[i]

    def colop_add(dst, src, k):
        # col_dst += k * col_src
        if k == 0:
            return
        for row in h:
            row[dst] += k * row[src]
        for row in u:
            row[dst] += k * row[src]

    def colop_neg(i):
        for row in h:
            row[i] = -row[i]
        for row in u:
            row[i] = -row[i]

    c = 0
    pivots = []
    for r in range(nr):
        if c >= nc:
            break
        while True:
            nz = [j for j in range(c, nc) if h[r][j] != 0]
            if not nz:
                break
            j = min(nz, key=lambda t: abs(h[r][t]))
            if j != c:
                colop_swap(c, j)
            done = True
            for j in range(c + 1, nc):
                if h[r][j] != 0:
                    colop_add(j, c, -(h[r][j] // h[r][c]))
                    if h[r][j] != 0:
                        done = False
            if done:
                break
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            colop_neg(c)
        for j in range(c):
            colop_add(j, c, -(h[r][j] // h[r][c]))
        pivots.append((r, c))
        c += 1
    return h, u


def lattice_basis(gens: Sequence[Sequence], n: int) -> list:
    """Basis (as vectors) of the integer lattice generated by ``gens``."""
    if not gens:
        return []
    m = transpose([ivec(g) for g in gens])
    h, _ = hnf(m)
    cols = transpose(h)
    return [tuple(c) for c in cols if any(c)]


def int_solve(m: Matrix, rhs: Sequence) -> Optional[Vec]:
    """Some integer solution of m·x = rhs, or None."""
    nr = len(m)
    nc = len(m[0]) if m else 0
    if nc == 0:
        return None if any(rhs) else ()
    h, u = hnf(m)
    # forward substitution on the column echelon form
    y = [0] * nc
    resid = list(int(r) for r in rhs)
    col = 0
    for r in range(nr):
        if col < nc and h[r][col] != 0:
            q, rem = divmod(resid[r], h[r][col])
            if rem:
                return None
            y[col] = q
            for i in range(nr):
                resid[i] -= q * h[i][col]
            col += 1
        elif resid[r] != 0:
            return None
    if any(resid):
        return None
    return tuple(dot(row, y) for row in u)


def int_kernel(m: Matrix, ncols: Optional[int] = None) -> list:
    """Basis of the integer lattice {x in Z^n : m·x = 0}."""
    nc = len(m[0]) if m else (ncols or 0)
    if not m:
        return [unit(nc, i) for i in range(nc)]
    h, u = hnf(m)
    return [tuple(u[i][j] for i in range(nc)) for j in range(nc) if not any(h[r][j] for r in range(len(m)))]


def snf(m: Matrix) -> tuple[list, list, list]:
    """Smith normal form: returns (S, U, V) with S = U·M·V diagonal.

    Diagonal entries are non-negative and form a divisibility chain.
    """
    nr = len(m)
    nc = len(m[0]) if m else 0
    s = [[int(x) for x in row] for row in m]
    u = identity(nr)
    v = identity(nc)

    def rswap(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def radd(dst, src, k):
        s[dst] = [a + k * b for a, b in zip(s[dst], s[src])]
        u[dst] = [a + k * b for a, b in zip(u[dst], u[src])]

    def cswap(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def cadd(dst, src, k):
        for row in s:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    t = 0
    while t < min(nr, nc):
        nz = [(abs(s[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if s[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        rswap(t, i)
        cswap(t, j)
        while True:
            changed = False
            for i in range(t + 1, nr):
                if s[i][t]:
                    radd(i, t, -(s[i][t] // s[t][t]))
                    if s[i][t]:
                        rswap(t, i)
                        changed = True
            for j in range(t + 1, nc):
                if s[t][j]:
                    cadd(j, t, -(s[t][j] // s[t][t]))
                    if s[t][j]:
                        cswap(t, j)
                        changed = True
            if changed:
                continue
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                        if s[i][j] % s[t][t]), None)
            if bad is None:
                break
            radd(t, bad[0], 1)
        if s[t][t] < 0:
            s[t] = [-a for a in s[t]]
            u[t] = [-a for a in u[t]]
        t += 1
    return s, u, v


# --- LP feasibility ---------------------------------------------------------

def _fm_row(a, b, s) -> tuple:
    """Normalize a·x >= b (or >): integer primitive a, rational b."""
    b = to_rat(b)
    den = b.denominator
    ints = []
    for x in a:
        x = to_rat(x)
        den = den * x.denominator // gcd(den, x.denominator)
        ints.append(x)
    a = [int(x * den) for x in ints]
    b = b * den
    g = 0
    for x in a:
        g = gcd(g, x)
    if g > 1:
        a = [x // g for x in a]
        b = b / g
    return tuple(a), b, s


def _fm_eliminate(rows: list, k: int) -> list:
    """One Fourier-Motzkin step on rows (a, b, strict) meaning a·x >= b (> if strict)."""
    pos, neg, rest = [], [], []
    for r in rows:
        c = r[0][k]
        (pos if c > 0 else neg if c < 0 else rest).append(r)
    out = list(rest)
    for a1, b1, s1 in pos:
        for a2, b2, s2 in neg:
            c1, c2 = a1[k], -a2[k]
            a = tuple(c2 * x + c1 * y for x, y in zip(a1, a2))
            out.append(_fm_row(a, c2 * b1 + c1 * b2, s1 or s2))
    return _dedupe(out)


def _dedupe(rows: list) -> list:
    best: dict = {}
    for a, b, s in rows:
        old = best.get(a)
        if old is None or b > old[0] or (b == old[0] and s and not old[1]):
            best[a] = (b, s)
    return [(a, b, s) for a, (b, s) in best.items()]


def _trivially_false(rows: list) -> bool:
    for a, b, s in rows:
        if not any(a) and (b > 0 or (s and b == 0)):
            return True
    return False


def fm_projections(rows: Sequence[tuple], n: int, max_rows: int = 4000) -> list:
    """proj[j] = rows (a, b, strict) over the first j coordinates implied by ``rows``.

    Elimination stops early when a stage grows past ``max_rows``; the shorter
    prefixes then get no constraints, which is still a valid relaxation.
    """
    cur = _dedupe([_fm_row(a, b, s) for a, b, s in rows])
    proj = [[] for _ in range(n + 1)]
    proj[n] = cur
    for k in range(n - 1, -1, -1):
        cur = _fm_eliminate(cur, k)
        if len(cur) > max_rows:
            break
        proj[k] = cur
    return proj


def _fm_witness(rows: list, n: int) -> Optional[Vec]:
    """Feasible point of {a·x >= b / > b} by Fourier-Motzkin with back substitution."""
    rows = _dedupe([_fm_row(a, b, s) for a, b, s in rows])
    stages = [rows]
    cur = rows
    for k in range(n - 1, -1, -1):
        if _trivially_false(cur):
            return None
        cur = _fm_eliminate(cur, k)
        stages.append(cur)
    if _trivially_false(cur):
        return None
    x = [Fraction(0)] * n
    for k in range(n):
        sys_k = stages[n - 1 - k]
        lo, lo_s, hi, hi_s = None, False, None, False
        for a, b, s in sys_k:
            c = a[k]
            if c == 0:
                continue
            rhs = (b - sum(a[j] * x[j] for j in range(k))) / c
            if c > 0:
                if lo is None or rhs > lo or (rhs == lo and s):
                    lo, lo_s = rhs, s
            else:
                if hi is None or rhs < hi or (rhs == hi and s):
                    hi, hi_s = rhs, s
        x[k] = _pick_between(lo, lo_s, hi, hi_s)
    return tuple(x)


def _pick_between(lo, lo_s, hi, hi_s) -> Fraction:
    def ok(v):
        if lo is not None and (v < lo or (lo_s and v == lo)):
            return False
        if hi is not None and (v > hi or (hi_s and v == hi)):
            return False
        return True

    cands = [Fraction(0)]
    if lo is not None:
        cands += [Fraction(lo.__floor__() + 1), lo]
    if hi is not None:
        cands += [Fraction(hi.__ceil__() - 1), hi]
    if lo is not None and hi is not None:
        cands.append((lo + hi) / 2)
    for v in cands:
        if ok(v):
            return v
    raise ArithmeticError("empty interval during back substitution")


def _simplex_witness(rows: list, n: int) -> Optional[Vec]:
    """Exact two-phase simplex (Bland's rule) for {a·x >= b}; strict rows use slack 1 after scaling.

    Strict constraints are handled by maximising a common margin t <= 1 with
    a·x - t >= b for strict rows; the system is strictly feasible iff t > 0.
    """
    rows = [(tuple(to_rat(x) for x in a), to_rat(b), s) for a, b, s in rows]
    # variables: x+ (n), x- (n), t, slacks (m)
    m = len(rows)
    nv = 2 * n + 1 + m
    tcol = 2 * n
    a_eq = []
    rhs = []
    for i, (a, b, s) in enumerate(rows):
        row = [Fraction(0)] * nv
        for j in range(n):
            row[j] = a[j]
            row[n + j] = -a[j]
        if s:
            row[tcol] = Fraction(-1)
        row[tcol + 1 + i] = Fraction(-1)
        a_eq.append(row)
        rhs.append(b)
    # t <= 1  ->  t + slack = 1
    row = [Fraction(0)] * (nv + 1)
    row[tcol] = Fraction(1)
    row[nv] = Fraction(1)
    for r in a_eq:
        r.append(Fraction(0))
    a_eq.append(row)
    rhs.append(Fraction(1))
    nv += 1
    obj = [Fraction(0)] * nv
    obj[tcol] = Fraction(1)
    res = _simplex_max(a_eq, rhs, obj)
    if res is None:
        return None
    val, x = res
    if any(s for _, _, s in rows) and val <= 0:
        return None
    return tuple(x[j] - x[n + j] for j in range(n))


def _simplex_max(a: list, b: list, c: list) -> Optional[tuple]:
    """max c·x s.t. a·x = b, x >= 0. Returns (value, x) or None if infeasible.

    The objective used here is bounded by construction.
    """
    m, nv = len(a), len(a[0]) if a else len(c)
    a = [list(r) for r in a]
    b = list(b)
    for i in range(m):
        if b[i] < 0:
            a[i] = [-x for x in a[i]]
            b[i] = -b[i]
    # phase 1 with artificials
    tab = [a[i] + [Fraction(1) if k == i else Fraction(0) for k in range(m)] + [b[i]] for i in range(m)]
    total = nv + m
    basis = [nv + i for i in range(m)]

    def pivot(r, col):
        pv = tab[r][col]
        tab[r] = [x / pv for x in tab[r]]
        for i in range(m):
            if i != r and tab[i][col] != 0:
                f = tab[i][col]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[r])]
        basis[r] = col

    def run(cost: list, allowed: int) -> bool:
        while True:
            # reduced costs
            red = []
            for j in range(allowed):
                if j in basis:
                    continue
                rc = cost[j] - sum(cost[basis[i]] * tab[i][j] for i in range(m))
                if rc > 0:
                    red.append(j)
            if not red:
                return True
            col = min(red)
            best = None
            for i in range(m):
                if tab[i][col] > 0:
                    ratio = tab[i][-1] / tab[i][col]
                    if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                        best = (ratio, i)
            if best is None:
                return False
            pivot(best[1], col)

    cost1 = [Fraction(0)] * nv + [Fraction(-1)] * m
    run(cost1, total)
    if sum(tab[i][-1] for i in range(m) if basis[i] >= nv) != 0:
        return None
    # drive artificials out of the basis
    for i in range(m):
        if basis[i] >= nv:
            col = next((j for j in range(nv) if tab[i][j] != 0 and j not in basis), None)
            if col is not None:
                pivot(i, col)
    cost2 = list(c) + [Fraction(0)] * m
    if not run(cost2, nv):
        raise ArithmeticError("unbounded objective")
    x = [Fraction(0)] * nv
    for i in range(m):
        if basis[i] < nv:
            x[basis[i]] = tab[i][-1]
    return sum(ci * xi for ci, xi in zip(c, x)), x


def polyhedron_witness(rows: Sequence[tuple], n: int) -> Optional[Vec]:
    """A rational point satisfying every row (a, b, strict): a·x >= b, or > b when strict."""
    rows = list(rows)
    if n == 0:
        for _, b, s in rows:
            if b > 0 or (s and b == 0):
                return None
        return ()
    if n <= FM_MAX_DIM:
        return _fm_witness(rows, n)
    return _simplex_witness(rows, n)


def lp_witness(strict: Matrix, nonstrict: Matrix, equalities: Matrix, n: int) -> Optional[Vec]:
    """Rational x with strict·x > 0, nonstrict·x >= 0 and equalities·x = 0, or None.

    Homogeneity lets strict rows be scaled to strict·x >= 1.
    """
    rows = [(tuple(r), 1, False) for r in strict]
    rows += [(tuple(r), 0, False) for r in nonstrict]
    for r in equalities:
        rows.append((tuple(r), 0, False))
        rows.append((tuple(-x for x in r), 0, False))
    w = polyhedron_witness(rows, n)
    if w is None:
        return None
    return w


def lp_feasible(strict: Matrix, nonstrict: Matrix, equalities: Matrix, n: Optional[int] = None) -> bool:
    """True iff some rational x has strict·x > 0, nonstrict·x >= 0, equalities·x = 0."""
    if n is None:
        n = next((len(r) for r in (*strict, *nonstrict, *equalities)), 0)
    return lp_witness(strict, nonstrict, equalities, n) is not None


# --- minimal non-negative solutions -----------------------------------------

@dataclass(frozen=True)
class DiophantineSystem:
    """A·x = b over non-negative integer x."""

    a: tuple
    b: tuple

    @staticmethod
    def of(a: Matrix, b: Optional[Sequence] = None) -> "DiophantineSystem":
        a_t = tuple(ivec(r) for r in a)
        nr = len(a_t)
        b_t = ivec(b) if b is not None else (0,) * nr
        if len(b_t) != nr:
            raise ValueError("right-hand side length mismatch")
        return DiophantineSystem(a_t, b_t)

    @property
    def nvars(self) -> int:
        return len(self.a[0]) if self.a else 0


def _contejean_devie(cols: list, nvars: int, budget: int, cap_last: bool = False) -> list:
    """Minimal nonzero x >= 0 with sum x_j·cols[j] = 0.

    With ``cap_last`` the last component is kept at most 1; every minimal
    solution under that cap is still reached.
    """

    def capped(x):
        return cap_last and x[-1] > 1

    sols: list = []
    frontier = [(unit(nvars, j), tuple(cols[j])) for j in range(nvars)]
    steps = 0
    seen = set()
    while frontier:
        nxt = []
        for x, ax in frontier:
            steps += 1
            if steps > budget:
                raise BudgetExceeded(sorted(set(sols)), steps)
            if not any(ax):
                if not any(leq(s, x) for s in sols):
                    sols.append(x)
                continue
            if any(leq(s, x) for s in sols):
                continue
            for j in range(nvars):
                if dot(ax, cols[j]) < 0:
                    y = x[:j] + (x[j] + 1,) + x[j + 1:]
                    if capped(y) or y in seen:
                        continue
                    seen.add(y)
                    nxt.append((y, vadd(ax, cols[j])))
        frontier = nxt
    sols = [s for s in sols if not any(t != s and leq(t, s) for t in sols)]
    return sorted(set(sols))


def minimal_nonneg_solutions(sys: DiophantineSystem, budget: int = 100_000) -> list:
    """The componentwise-minimal non-negative integer solutions of A·x = b.

    For b = 0 these are the minimal nonzero solutions. Raises
    BudgetExceeded(partial) when more than ``budget`` frontier expansions
    are needed.
    """
    n = sys.nvars
    if not sys.a:
        return [unit(n, j) for j in range(n)]
    cols = [tuple(r[j] for r in sys.a) for j in range(n)]
    if not any(sys.b):
        return _contejean_devie(cols, n, budget)
    ext = cols + [tuple(-x for x in sys.b)]
    sols = _contejean_devie(ext, n + 1, budget, cap_last=True)
    return sorted(s[:n] for s in sols if s[n] == 1)
