"""Lattices, full periodic sets and finitely generated periodic sets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import lcm
from typing import Iterable, Iterator, Optional, Sequence

from .cones import ConeH, ConeV
from .errors import BudgetExceeded, ConeMismatch, NotInLattice, NotMember
from .exactla import (
    dot,
    hnf,
    int_kernel,
    int_solve,
    ivec,
    matvec,
    snf,
    solve,
    transpose,
    unit,
    vadd,
    vscale,
    vsub,
    zero,
)


@dataclass(frozen=True)
class Lattice:
    """Integer combinations of ``basis`` (column-style HNF, independent)."""

    dim: int
    basis: tuple = ()

    @staticmethod
    def from_generators(dim: int, gens: Iterable[Sequence]) -> "Lattice":
        gens = [ivec(g) for g in gens]
        if not gens:
            return Lattice(dim, ())
        h, _ = hnf(transpose(gens))
        cols = [tuple(c) for c in transpose(h) if any(c)]
        return Lattice(dim, tuple(cols))

    @staticmethod
    def full(dim: int) -> "Lattice":
        return Lattice(dim, tuple(unit(dim, i) for i in range(dim)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def member(self, x: Sequence) -> bool:
        eqs, congs = self.congruence_form
        return all(dot(u, x) == 0 for u in eqs) and all(dot(w, x) % d == 0 for w, d in congs)

    def coords(self, x: Sequence) -> Optional[tuple]:
        if not self.basis:
            return () if not any(x) else None
        return int_solve(transpose(self.basis), x)

    def intersect(self, other: "Lattice") -> "Lattice":
        if not self.basis or not other.basis:
            return Lattice(self.dim, ())
        m = [list(a) + [-b for b in bb] for a, bb in zip(transpose(self.basis), transpose(other.basis))]
        ker = int_kernel(m, len(self.basis) + len(other.basis))
        k = len(self.basis)
        gens = [matvec(transpose(self.basis), z[:k]) for z in ker]
        return Lattice.from_generators(self.dim, gens)

    def sum(self, other: "Lattice") -> "Lattice":
        return Lattice.from_generators(self.dim, list(self.basis) + list(other.basis))

    def restrict(self, eq_rows: Sequence[Sequence]) -> "Lattice":
        """L ∩ {x : eq_rows·x = 0}."""
        if not eq_rows or not self.basis:
            return self
        b = transpose(self.basis)
        m = [[dot(r, col) for col in self.basis] for r in eq_rows]
        ker = int_kernel(m, len(self.basis))
        return Lattice.from_generators(self.dim, [matvec(b, z) for z in ker])

    @cached_property
    def congruence_form(self) -> tuple:
        """(equalities, congruences) with x in L iff every u·x = 0 and w·x ≡ 0 mod d.

        Congruences are triples (w, d) with d > 1, read off the Smith form.
        """
        n = self.dim
        if not self.basis:
            return tuple(unit(n, i) for i in range(n)), ()
        s, u, _ = snf(transpose(self.basis))
        k = len(self.basis)
        eqs, congs = [], []
        for i in range(n):
            d = s[i][i] if i < k else 0
            row = tuple(u[i])
            if d == 0:
                eqs.append(row)
            elif d > 1:
                congs.append((tuple(a % d for a in row), d))
        return tuple(eqs), tuple(congs)

    def index_in_span(self) -> int:
        """Index of L inside Z^n ∩ span(L)."""
        full = Lattice.full(self.dim).restrict(self.congruence_form[0])
        if not self.basis:
            return 1
        coords = [full.coords(b) for b in self.basis]
        from .exactla import det
        return abs(int(det(coords)))

    def multiple_in(self, v: Sequence) -> int:
        """Smallest m >= 1 with m·v in the lattice; raises NotInLattice if none."""
        sol = solve(transpose(self.basis), v) if self.basis else None
        if sol is None:
            if not any(v):
                return 1
            raise NotInLattice(f"{tuple(v)} is outside span of lattice")
        # coordinates in an independent basis are unique
        den = 1
        for c in sol:
            den = lcm(den, c.denominator)
        return den

    def to_json(self) -> list:
        return [list(b) for b in self.basis]


def lattice_points_in_box(x0: Sequence, lat: Lattice, lo: Sequence, hi: Sequence,
                          budget: Optional[int] = None, cuts: Optional[list] = None) -> Iterator[tuple]:
    """All points of x0 + lat with lo <= x <= hi, via the echelon structure of the basis.

    ``cuts[j]``, when given, holds rows (a, b, strict) over the first j
    coordinates; branches violating them are pruned (see fm_projections).
    """
    n = len(x0)
    if any(l > h for l, h in zip(lo, hi)):
        return
    basis = list(lat.basis)
    k = len(basis)
    pivots = []
    for b in basis:
        pivots.append(next(i for i in range(n) if b[i] != 0))
    steps = [0]

    def rec(c: int, cur: tuple, row_from: int):
        # rows before the next pivot are fixed once columns < c are chosen
        row_to = pivots[c] if c < k else n
        for r in range(row_from, row_to):
            if not lo[r] <= cur[r] <= hi[r]:
                return
        if cuts is not None and row_to > row_from:
            for a, b, strict in cuts[row_to]:
                v = sum(x * y for x, y in zip(a, cur))
                if v < b or (strict and v == b):
                    return
        if c == k:
            steps[0] += 1
            if budget is not None and steps[0] > budget:
                raise BudgetExceeded(None, steps[0])
            yield cur
            return
        p = pivots[c]
        hp = basis[c][p]
        zlo = -((cur[p] - lo[p]) // hp)
        zhi = (hi[p] - cur[p]) // hp
        for z in range(zlo, zhi + 1):
            yield from rec(c + 1, vadd(cur, vscale(z, basis[c])), p)

    yield from rec(0, tuple(x0), 0)


@dataclass(frozen=True)
class FullPeriodic:
    """cone ∩ lattice, with the cone cut down to the span of the lattice."""

    cone: ConeH
    lattice: Lattice

    @staticmethod
    def make(cone: ConeH, lattice: Lattice) -> "FullPeriodic":
        if cone.dim != lattice.dim:
            raise ValueError("cone and lattice dimensions differ")
        eqs, _ = lattice.congruence_form
        if eqs:
            cone = ConeH.make(cone.dim, list(cone.eq) + list(eqs), cone.geq)
        lattice = lattice.restrict(cone.eq)
        return FullPeriodic(cone, lattice)

    @staticmethod
    def orthant(n: int) -> "FullPeriodic":
        return FullPeriodic(ConeH.orthant(n), Lattice.full(n))

    @staticmethod
    def zero(n: int) -> "FullPeriodic":
        return FullPeriodic(ConeH.zero(n), Lattice(n, ()))

    @property
    def dim_ambient(self) -> int:
        return self.cone.dim

    @property
    def dim(self) -> int:
        return self.cone.cone_dim

    def member(self, x: Sequence) -> bool:
        return self.cone.member(x) and self.lattice.member(x)

    def __contains__(self, x) -> bool:
        return self.member(x)

    def interior_member(self, x: Sequence) -> bool:
        return self.cone.interior_member(x) and self.lattice.member(x)

    @cached_property
    def ray_generators(self) -> tuple:
        """Lattice-primitive points on the extreme rays."""
        rays = self.cone.vrep.generators
        return tuple(vscale(self.lattice.multiple_in(r), r) for r in rays)

    @cached_property
    def generators(self) -> tuple:
        return tuple(generators_of(self).generators)

    def same_set(self, other: "FullPeriodic") -> bool:
        return self.cone.same(other.cone) and set(self.lattice.basis) == set(other.lattice.basis)

    def facet_sets(self) -> list:
        return [FullPeriodic(f, self.lattice.restrict(f.eq)) for f in self.cone.facets()]

    def to_json(self) -> dict:
        return {"type": "full_periodic", "cone": self.cone.to_json(), "lattice": self.lattice.to_json()}


@dataclass(frozen=True)
class GeneratorPeriodic:
    """F*: all finite sums of the generators."""

    dim: int
    generators: tuple = ()

    @staticmethod
    def make(dim: int, gens: Iterable[Sequence]) -> "GeneratorPeriodic":
        out = []
        for g in gens:
            g = ivec(g)
            if len(g) != dim:
                raise ValueError("generator dimension mismatch")
            if any(a < 0 for a in g):
                raise ValueError("generators must lie in N^n")
            if any(g) and g not in out:
                out.append(g)
        return GeneratorPeriodic(dim, tuple(sorted(out)))

    def member(self, x: Sequence) -> bool:
        return _nonneg_combination(self.generators, tuple(x)) is not None

    def __contains__(self, x) -> bool:
        return self.member(x)

    def combination(self, x: Sequence) -> Optional[tuple]:
        return _nonneg_combination(self.generators, tuple(x))

    @cached_property
    def lattice(self) -> Lattice:
        return Lattice.from_generators(self.dim, self.generators)

    @cached_property
    def cone(self) -> ConeH:
        return ConeV.make(self.dim, self.generators).hrep

    def to_json(self) -> dict:
        return {"type": "gen_periodic", "dim": self.dim, "generators": [list(g) for g in self.generators]}


def _nonneg_combination(gens: tuple, x: tuple) -> Optional[tuple]:
    """Non-negative integer a with sum a_i·g_i = x (generators in N^n), or None."""
    if any(v < 0 for v in x):
        return None
    if not any(x):
        return (0,) * len(gens)
    memo: dict = {}

    def rec(rest: tuple, start: int) -> Optional[list]:
        if not any(rest):
            return [0] * len(gens)
        key = (rest, start)
        if key in memo:
            return memo[key]
        memo[key] = None
        for i in range(start, len(gens)):
            g = gens[i]
            nxt = tuple(a - b for a, b in zip(rest, g))
            if any(v < 0 for v in nxt):
                continue
            sub = rec(nxt, i)
            if sub is not None:
                sub = list(sub)
                sub[i] += 1
                memo[key] = sub
                return sub
        return None

    if not gens:
        return None
    res = rec(x, 0)
    return tuple(res) if res is not None else None


def fill(p: GeneratorPeriodic) -> FullPeriodic:
    """cone(F) ∩ lattice(F)."""
    return FullPeriodic.make(p.cone, p.lattice)


def is_full(p: GeneratorPeriodic) -> bool:
    f = fill(p)
    return all(p.member(g) for g in generators_of(f).generators)


def member(q, x: Sequence) -> bool:
    return q.member(x)


def intersect_full(q1: FullPeriodic, q2: FullPeriodic) -> FullPeriodic:
    return FullPeriodic.make(q1.cone.intersect(q2.cone), q1.lattice.intersect(q2.lattice))


# --- generator extraction ------------------------------------------------------

def triangulate(cone: ConeH) -> list:
    """Simplicial cones (tuples of extreme rays) covering a pointed cone."""
    rays = list(cone.vrep.generators)
    d = cone.cone_dim
    if d == 0:
        return []
    if cone.lineality:
        raise ValueError("cone is not pointed")
    return _triangulate(rays, cone, d)


def _triangulate(rays: list, cone: ConeH, d: int) -> list:
    if len(rays) == d:
        return [tuple(rays)]
    apex = rays[0]
    out = []
    for f in cone.facets():
        if f.member(apex):
            continue
        frays = [r for r in rays if f.member(r)]
        if f.cone_dim == 0:
            continue
        for simplex in _triangulate(frays, f, d - 1):
            out.append((apex,) + simplex)
    return out


def parallelepiped_points(vs: Sequence[Sequence], lat: Lattice, budget: Optional[int] = None) -> list:
    """Points of lat in {sum λ_i v_i : 0 <= λ_i < 1} for independent v_i in lat."""
    k = len(vs)
    sub = lat.restrict(_eq_rows_of_span(vs, lat.dim))
    w = [sub.coords(v) for v in vs]  # v_i = B w_i
    wmat = transpose(w)  # k x k, columns w_i
    s, u, v = snf(wmat)
    diag = [s[i][i] for i in range(k)]
    uinv = _unimodular_inverse(u)
    pts = []
    count = 0
    bmat = transpose(sub.basis)
    for t in itertools.product(*[range(d) for d in diag]):
        count += 1
        if budget is not None and count > budget:
            raise BudgetExceeded(pts, count)
        z = matvec(uinv, t)
        lam = solve(wmat, z)
        frac = [x - (x.numerator // x.denominator) for x in lam]
        zz = matvec(wmat, frac)
        pts.append(tuple(int(c) for c in matvec(bmat, zz)))
    return pts


def _eq_rows_of_span(vs: Sequence[Sequence], n: int) -> list:
    from .exactla import kernel
    return kernel([list(v) for v in vs], n) if vs else [unit(n, i) for i in range(n)]


def _unimodular_inverse(u: list) -> list:
    from .exactla import rref
    n = len(u)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(u)]
    red, _ = rref(aug)
    return [[int(x) for x in row[n:]] for row in red]


def generators_of(q: FullPeriodic, budget: int = 100_000) -> GeneratorPeriodic:
    """Finite F with F* = q: ray generators plus parallelepiped points of a triangulation."""
    n = q.cone.dim
    if q.dim == 0:
        return GeneratorPeriodic(n, ())
    lat = q.lattice
    gens: set = set()
    used = 0
    for simplex in triangulate(q.cone):
        vs = [vscale(lat.multiple_in(r), r) for r in simplex]
        gens.update(vs)
        try:
            pts = parallelepiped_points(vs, lat, None if budget is None else budget - used)
        except BudgetExceeded as e:
            gens.update(p for p in e.partial if any(p))
            raise BudgetExceeded(GeneratorPeriodic(n, tuple(sorted(gens))), used + e.expended)
        used += len(pts)
        gens.update(p for p in pts if any(p))
    return GeneratorPeriodic(n, tuple(sorted(_irreducible(sorted(gens), q))))


def _irreducible(gens: list, q: FullPeriodic) -> list:
    """Drop generators that split as g = h + (g - h) with both parts in q."""
    out = []
    for g in gens:
        if not any(h != g and q.member(vsub(g, h)) and any(vsub(g, h)) for h in gens):
            out.append(g)
    return out


# --- periodic-set lemmas ---------------------------------------------------------

def subtract_shifted(q: FullPeriodic, x: Sequence):
    """q \\ (x + q) as a Semilinear set of strictly smaller dimension."""
    from .semilinear import shifted_difference
    x = ivec(x)
    if not q.member(x):
        raise NotMember(f"{x} is not in the periodic set")
    return shifted_difference(q, x)


def scale_into(q: FullPeriodic, q2: FullPeriodic) -> int:
    """λ with λ·q ⊆ q2, the product of per-generator multipliers."""
    if not q.cone.same(q2.cone):
        raise ConeMismatch("periodic sets span different cones")
    lam = 1
    for g in q.generators:
        lam *= q2.lattice.multiple_in(g)
    return lam


def finite_pump(p, fs: Iterable[Sequence]) -> tuple:
    """p0 in P with p0 + f in P for every f, built from negative parts over the generators."""
    gp = p if isinstance(p, GeneratorPeriodic) else GeneratorPeriodic(p.cone.dim, generators_of(p).generators)
    n = gp.dim
    p0 = zero(n)
    gens = list(gp.generators)
    for f in fs:
        f = ivec(f)
        if not any(f):
            continue
        if not gens:
            raise NotInLattice(f"{f} not in the lattice of the empty generator set")
        z = int_solve(transpose(gens), f)
        if z is None:
            raise NotInLattice(f"{f} is not in the group generated by P")
        for zi, g in zip(z, gens):
            if zi < 0:
                p0 = vadd(p0, vscale(-zi, g))
    return p0


def boundary_fill_cover(q: FullPeriodic, budget: int = 100_000) -> list:
    """Minimal interior elements of q; every point of q lies in ∂q + F*."""
    from .semilinear import ConstraintCell, cell_bases
    if q.dim == 0:
        return []
    cell = ConstraintCell.for_periodic(q, strict=True)
    bases, _ = cell_bases(cell, budget)
    return sorted(bases)
