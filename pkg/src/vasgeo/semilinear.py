"""Full linear, hybridlinear and semilinear sets over N^n.

Most set operations reduce to ConstraintCell, a conjunction of linear
equalities, inequalities and congruences over N^n. ``cell_to_semilinear``
turns a cell into pairwise-disjoint full linear sets: the cell is B + Q for
Q = recession cone ∩ lattice, and overlapping translates b + Q are cut apart
into slabs whose recession cones are facets, so the recursion ends.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .cones import ConeH, double_description
from .errors import BudgetExceeded
from .exactla import (
    FM_MAX_DIM,
    dot,
    fm_projections,
    int_kernel,
    int_solve,
    ivec,
    polyhedron_witness,
    unit,
    vsub,
)
from .periodic import FullPeriodic, GeneratorPeriodic, Lattice, lattice_points_in_box

DEFAULT_BUDGET = 200_000


@dataclass(frozen=True)
class ConstraintCell:
    """{x in N^n : eq rows = rhs, geq rows >= rhs, congruences}.

    ``eqs`` and ``geqs`` hold (row, rhs); ``congs`` holds (row, modulus, residue).
    """

    dim: int
    eqs: tuple = ()
    geqs: tuple = ()
    congs: tuple = ()

    def member(self, x: Sequence) -> bool:
        if any(v < 0 for v in x):
            return False
        return (all(dot(r, x) == c for r, c in self.eqs)
                and all(dot(r, x) >= c for r, c in self.geqs)
                and all((dot(r, x) - c) % m == 0 for r, m, c in self.congs))

    def conj(self, other: "ConstraintCell") -> "ConstraintCell":
        return ConstraintCell(self.dim, self.eqs + other.eqs, self.geqs + other.geqs, self.congs + other.congs)

    def add(self, eqs=(), geqs=(), congs=()) -> "ConstraintCell":
        return ConstraintCell(self.dim, self.eqs + tuple(eqs), self.geqs + tuple(geqs), self.congs + tuple(congs))

    @staticmethod
    def universe(n: int) -> "ConstraintCell":
        return ConstraintCell(n)

    @staticmethod
    def for_periodic(q: FullPeriodic, base: Optional[Sequence] = None, strict: bool = False) -> "ConstraintCell":
        """Constraints of base + q (or base + interior of q when strict)."""
        n = q.cone.dim
        b = tuple(base) if base is not None else (0,) * n
        eqs = tuple((u, dot(u, b)) for u in q.cone.eq)
        leq_eqs, congs = q.lattice.congruence_form
        eqs += tuple((u, dot(u, b)) for u in leq_eqs if u not in q.cone.eq)
        cg = tuple((w, d, dot(w, b) % d) for w, d in congs)
        geqs = tuple((a, dot(a, b) + (1 if strict else 0)) for a in q.cone.geq)
        return ConstraintCell(n, eqs, geqs, cg)

    def rational_rows(self) -> list:
        n = self.dim
        rows = [(unit(n, i), 0, False) for i in range(n)]
        for r, c in self.eqs:
            rows.append((r, c, False))
            rows.append((tuple(-a for a in r), -c, False))
        rows += [(r, c, False) for r, c in self.geqs]
        return rows

    def rationally_feasible(self) -> bool:
        return polyhedron_witness(self.rational_rows(), self.dim) is not None

    def to_json(self) -> dict:
        return {"type": "cell", "dim": self.dim,
                "eq": [[list(r), c] for r, c in self.eqs],
                "geq": [[list(r), c] for r, c in self.geqs],
                "cong": [[list(r), m, c] for r, m, c in self.congs]}


@dataclass(frozen=True)
class LinearSet:
    """base + periodic, with periodic a full periodic set."""

    base: tuple
    periodic: FullPeriodic

    @property
    def dim_ambient(self) -> int:
        return len(self.base)

    @property
    def dim(self) -> int:
        return self.periodic.dim

    def member(self, x: Sequence) -> bool:
        return self.periodic.member(vsub(x, self.base))

    def __contains__(self, x) -> bool:
        return self.member(x)

    def cell(self) -> ConstraintCell:
        return ConstraintCell.for_periodic(self.periodic, self.base)

    def enumerate_box(self, bound: int) -> list:
        n = len(self.base)
        lat = self.periodic.lattice
        out = []
        for y in lattice_points_in_box(self.base, lat, (0,) * n, (bound,) * n):
            if self.periodic.cone.member(vsub(y, self.base)):
                out.append(y)
        return out

    def to_json(self) -> dict:
        return {"type": "linear", "base": list(self.base), "periodic": self.periodic.to_json()}


@dataclass(frozen=True)
class HybridLinear:
    """bases + periodic; no bases means the empty set."""

    dim_ambient: int
    bases: tuple
    periodic: FullPeriodic

    def member(self, x: Sequence) -> bool:
        return any(self.periodic.member(vsub(x, b)) for b in self.bases)

    def __contains__(self, x) -> bool:
        return self.member(x)

    @property
    def is_empty(self) -> bool:
        return not self.bases

    def to_semilinear(self) -> "Semilinear":
        return Semilinear(self.dim_ambient, tuple(LinearSet(b, self.periodic) for b in self.bases))

    def enumerate_box(self, bound: int) -> list:
        return self.to_semilinear().enumerate_box(bound)

    def to_json(self) -> dict:
        return {"type": "hybrid", "bases": [list(b) for b in self.bases], "periodic": self.periodic.to_json()}


@dataclass(frozen=True)
class Semilinear:
    """Finite union of full linear sets."""

    dim_ambient: int
    components: tuple = ()

    @staticmethod
    def of(n: int, comps: Iterable[LinearSet]) -> "Semilinear":
        return Semilinear(n, tuple(comps))

    @staticmethod
    def empty(n: int) -> "Semilinear":
        return Semilinear(n, ())

    @staticmethod
    def universe(n: int) -> "Semilinear":
        return Semilinear(n, (LinearSet((0,) * n, FullPeriodic.orthant(n)),))

    def member(self, x: Sequence) -> bool:
        return any(c.member(x) for c in self.components)

    def __contains__(self, x) -> bool:
        return self.member(x)

    @property
    def is_empty(self) -> bool:
        return not self.components

    @property
    def dim(self) -> int:
        return dim(self)

    def union(self, other: "Semilinear") -> "Semilinear":
        return Semilinear(self.dim_ambient, self.components + other.components)

    def intersect(self, other: "Semilinear", budget: int = DEFAULT_BUDGET) -> "Semilinear":
        out = []
        for a in self.components:
            for b in other.components:
                out += cell_to_semilinear(a.cell().conj(b.cell()), budget)
        return Semilinear(self.dim_ambient, tuple(out))

    def enumerate_box(self, bound: int) -> list:
        pts = set()
        for c in self.components:
            pts.update(c.enumerate_box(bound))
        return sorted(pts)

    def to_json(self) -> dict:
        return {"type": "semilinear", "dim": self.dim_ambient, "components": [c.to_json() for c in self.components]}


def member(s, x: Sequence) -> bool:
    return s.member(x)


def dim(s) -> int:
    """Largest periodic dimension among the components; -1 for the empty set."""
    if isinstance(s, LinearSet):
        return s.dim
    if isinstance(s, HybridLinear):
        return s.periodic.dim if s.bases else -1
    return max((c.dim for c in s.components), default=-1)


def enumerate_box(s, bound: int) -> list:
    return s.enumerate_box(bound)


# --- cells to linear sets -------------------------------------------------------

def affine_lattice(cell: ConstraintCell) -> Optional[tuple]:
    """(x0, L) with the integer solutions of the equalities and congruences equal to x0 + L."""
    n = cell.dim
    k = len(cell.congs)
    rows, rhs = [], []
    for r, c in cell.eqs:
        rows.append(list(r) + [0] * k)
        rhs.append(c)
    for j, (r, m, c) in enumerate(cell.congs):
        rows.append(list(r) + [(-m if i == j else 0) for i in range(k)])
        rhs.append(c)
    if not rows:
        return (0,) * n, Lattice.full(n)
    sol = int_solve(rows, rhs)
    if sol is None:
        return None
    ker = int_kernel(rows, n + k)
    lat = Lattice.from_generators(n, [z[:n] for z in ker])
    x0 = tuple(sol[:n])
    # shift x0 to a small representative for nicer enumeration
    return x0, lat


def _vertices_and_rays(cell: ConstraintCell) -> tuple:
    n = cell.dim
    ineqs = [unit(n + 1, n)]
    ineqs += [unit(n + 1, i) for i in range(n)]
    for r, c in cell.geqs:
        ineqs.append(tuple(r) + (-c,))
    for r, c in cell.eqs:
        ineqs.append(tuple(r) + (-c,))
        ineqs.append(tuple(-a for a in r) + (c,))
    _, rays = double_description(n + 1, ineqs)
    verts = [tuple(Fraction(a, r[n]) for a in r[:n]) for r in rays if r[n] > 0]
    rec = [r[:n] for r in rays if r[n] == 0]
    return verts, rec


def recession_cone(cell: ConstraintCell) -> ConeH:
    n = cell.dim
    return ConeH.make(n, [r for r, _ in cell.eqs], [r for r, _ in cell.geqs] + [unit(n, i) for i in range(n)])


def cell_bases(cell: ConstraintCell, budget: int = DEFAULT_BUDGET) -> tuple:
    """(B, Q) with cell = B + Q, B the Q-minimal points; ([], None) when empty."""
    n = cell.dim
    al = affine_lattice(cell)
    if al is None:
        return [], None
    x0, lat = al
    verts, rays = _vertices_and_rays(cell)
    if not verts:
        return [], None
    rec = recession_cone(cell)
    q = FullPeriodic.make(rec, lat)
    hi = [max(v[i] for v in verts).__floor__() for i in range(n)]
    for r in q.ray_generators:
        hi = [h + a for h, a in zip(hi, r)]
    rows = [(r, c, False) for r, c in cell.geqs]
    rows += [(r, c, False) for r, c in cell.eqs] + [(tuple(-a for a in r), -c, False) for r, c in cell.eqs]
    rows += [(unit(n, i), 0, False) for i in range(n)]
    rows += [(tuple(-a for a in unit(n, i)), -hi[i], False) for i in range(n)]
    cuts = fm_projections(rows, n) if n <= FM_MAX_DIM else None
    pts = []
    try:
        for y in lattice_points_in_box(x0, lat, (0,) * n, hi, budget, cuts):
            if all(dot(r, y) >= c for r, c in cell.geqs):
                pts.append(y)
    except BudgetExceeded as e:
        raise BudgetExceeded(pts, e.expended)
    pts.sort(key=lambda y: (sum(y), y))
    bases = []
    for y in pts:
        if not any(rec.member(vsub(y, b)) for b in bases):
            bases.append(y)
    return bases, q


def _negate_cone_ineqs(q: FullPeriodic, b: Sequence) -> list:
    """Disjoint branches of "y - b has a negative facet value", as geq-row lists."""
    out = []
    rows = list(q.cone.geq)
    for k, a in enumerate(rows):
        keep = [(r, dot(r, b)) for r in rows[:k]]
        neg = (tuple(-x for x in a), -dot(a, b) + 1)
        out.append(keep + [neg])
    return out


def _prune(cells: list) -> list:
    return [c for c in cells if c.rationally_feasible()]


def cell_to_semilinear(cell: ConstraintCell, budget: int = DEFAULT_BUDGET) -> list:
    """Pairwise-disjoint full linear sets whose union is the cell."""
    bases, q = cell_bases(cell, budget)
    if not bases:
        return []
    if q.dim == 0:
        return [LinearSet(b, q) for b in bases]
    out = []
    for j, b in enumerate(bases):
        pieces = [ConstraintCell.for_periodic(q, b)]
        split = False
        for bi in bases[:j]:
            if any(dot(u, b) != dot(u, bi) for u in q.cone.eq):
                continue
            split = True
            pieces = _prune([p.add(geqs=br) for p in pieces for br in _negate_cone_ineqs(q, bi)])
            if not pieces:
                break
        if not split:
            out.append(LinearSet(b, q))
            continue
        for p in pieces:
            out += cell_to_semilinear(p, budget)
    return out


# --- operations on linear sets -------------------------------------------------

def linear_intersect(l1: LinearSet, l2: LinearSet, budget: int = DEFAULT_BUDGET) -> HybridLinear:
    """B + (Q1 ∩ Q2) equal to l1 ∩ l2."""
    n = len(l1.base)
    if len(l2.base) != n:
        raise ValueError("dimension mismatch")
    bases, q = cell_bases(l1.cell().conj(l2.cell()), budget)
    if not bases:
        from .periodic import intersect_full
        return HybridLinear(n, (), intersect_full(l1.periodic, l2.periodic))
    return HybridLinear(n, tuple(bases), q)


def negation_branches(l: LinearSet) -> list:
    """Disjoint cells whose union is N^n minus l (ordered by first violated constraint)."""
    n = len(l.base)
    q, b = l.periodic, l.base
    out = []
    eq_rows = list(q.cone.eq)
    held: list = []
    for u in eq_rows:
        c = dot(u, b)
        out.append(ConstraintCell(n, tuple(held), ((tuple(-x for x in u), -c + 1),)))
        out.append(ConstraintCell(n, tuple(held), ((tuple(u), c + 1),)))
        held.append((tuple(u), c))
    _, congs = q.lattice.congruence_form
    held_c: list = []
    for w, d in congs:
        r = dot(w, b) % d
        for r2 in range(d):
            if r2 != r:
                out.append(ConstraintCell(n, tuple(held), (), tuple(held_c) + ((w, d, r2),)))
        held_c.append((w, d, r))
    for br in _negate_cone_ineqs(q, b):
        out.append(ConstraintCell(n, tuple(held), tuple(br), tuple(held_c)))
    return out


def cells_minus(cells: list, l: LinearSet) -> list:
    out = []
    for c in cells:
        for br in negation_branches(l):
            out.append(c.conj(br))
    return _prune(out)


def disjointify(s: Semilinear, budget: int = DEFAULT_BUDGET) -> Semilinear:
    """Same set, pairwise-disjoint components."""
    comps = list(s.components)
    out = []
    for j, c in enumerate(comps):
        cells = [c.cell()]
        touched = False
        for prev in comps[:j]:
            if not c.cell().conj(prev.cell()).rationally_feasible():
                continue
            touched = True
            cells = cells_minus(cells, prev)
            if not cells:
                break
        if not touched:
            out.append(c)
            continue
        for cell in cells:
            out += cell_to_semilinear(cell, budget)
    return Semilinear(s.dim_ambient, tuple(out))


def complement_decompose(l: LinearSet, s: Semilinear, budget: int = DEFAULT_BUDGET) -> list:
    """Pairwise-disjoint full linear sets covering s minus l."""
    out = []
    for c in disjointify(s, budget).components:
        for cell in cells_minus([c.cell()], l):
            out += cell_to_semilinear(cell, budget)
    return out


def semilinear_minus(s: Semilinear, t: Semilinear, budget: int = DEFAULT_BUDGET) -> Semilinear:
    """s minus t as disjoint full linear sets."""
    out = []
    for c in disjointify(s, budget).components:
        cells = [c.cell()]
        for l in t.components:
            cells = cells_minus(cells, l)
            if not cells:
                break
        for cell in cells:
            out += cell_to_semilinear(cell, budget)
    return Semilinear(s.dim_ambient, tuple(out))


def shifted_difference(q: FullPeriodic, x: Sequence, budget: int = DEFAULT_BUDGET) -> Semilinear:
    """q minus (x + q), for x in q."""
    n = q.cone.dim
    base = ConstraintCell.for_periodic(q)
    out = []
    for br in _negate_cone_ineqs(q, x):
        cell = base.add(geqs=br)
        if cell.rationally_feasible():
            out += cell_to_semilinear(cell, budget)
    return Semilinear(n, tuple(out))


def boundary(l: LinearSet, budget: int = DEFAULT_BUDGET) -> Semilinear:
    """b + (Q ∩ ∂cone), split disjointly by the first facet that is tight."""
    n = len(l.base)
    q, b = l.periodic, l.base
    base = l.cell()
    out = []
    rows = list(q.cone.geq)
    for k, a in enumerate(rows):
        strict = tuple((r, dot(r, b) + 1) for r in rows[:k])
        cell = base.add(eqs=((a, dot(a, b)),), geqs=strict)
        if cell.rationally_feasible():
            out += cell_to_semilinear(cell, budget)
    return Semilinear(n, tuple(out))


def interior(l: LinearSet, budget: int = DEFAULT_BUDGET) -> Semilinear:
    n = len(l.base)
    cell = ConstraintCell.for_periodic(l.periodic, l.base, strict=True)
    return Semilinear(n, tuple(cell_to_semilinear(cell, budget)))


def linear_from_generators(base: Sequence, gens: Sequence[Sequence]) -> LinearSet:
    """base + Fill(gens*); exact only when the generated set is full."""
    from .periodic import fill
    n = len(base)
    return LinearSet(tuple(ivec(base)), fill(GeneratorPeriodic.make(n, gens)))


def box_equal(pred_a, pred_b, bound: int, n: int) -> bool:
    import itertools
    return all(pred_a(x) == pred_b(x) for x in itertools.product(range(bound + 1), repeat=n))
