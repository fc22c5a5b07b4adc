"""Complete extractions of cone families and the reducibility decision.

A family K_1..K_r of definable cones lives inside a closed ambient cone
(the non-negative orthant unless stated otherwise). Every K_i is a union of
cells of the sign arrangement cut out by all the linear forms involved, so
the question reduces to finite combinatorics on that arrangement:

* a chain of cells G_1 < ... < G_s (each in the closure of the next) whose
  top lies in ⋃K must have one K_j containing all of its cells;
* when that holds for every maximal chain, the simplicial cones spanned by
  chain representatives form an extraction;
* a chain that fails yields vectors v_1..v_s whose open prefix cones each
  sit inside one cell, and no K_j meets all of them, which rules out any
  extraction.

Both outcomes are re-verified by independent exact checks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence

from .cones import ConeH, ConeV, DefinableCone
from .errors import (
    BudgetExceeded,
    InputError,
    PreconditionViolated,
    WitnessVerificationFailed,
)
from .exactla import dot, ivec, lp_witness, primitive, rank, unit, vadd, vscale, vsub, zero
from .periodic import FullPeriodic, GeneratorPeriodic, generators_of, is_full, lattice_points_in_box
from .smooth import (
    AlmostHybridRep,
    GeneratorModel,
    SmoothModel,
    _interior_lattice_point,
    pump_base,
    weak_hybridization,
)

DEFAULT_BUDGET = 100_000


# --- families and results ---------------------------------------------------------

def _as_pieces(k) -> tuple:
    if isinstance(k, DefinableCone):
        return (k,)
    if isinstance(k, ConeH):
        return (DefinableCone.from_cone(k),)
    return tuple(k)


@dataclass(frozen=True)
class ConeFamily:
    """K_1..K_r, each a union of DefinableCone pieces, cut to ``ambient``."""

    dim: int
    cones: tuple
    ambient: ConeH

    @staticmethod
    def make(cones: Iterable, ambient: Optional[ConeH] = None) -> "ConeFamily":
        cones = tuple(_as_pieces(k) for k in cones)
        if not cones:
            raise InputError("a cone family needs at least one cone")
        n = cones[0][0].dim
        for k in cones:
            for p in k:
                if p.dim != n:
                    raise InputError("cones of different dimensions")
        amb = ambient if ambient is not None else ConeH.orthant(n)
        return ConeFamily(n, cones, amb)

    def pieces(self, i: int) -> tuple:
        """K_i ∩ ambient as pieces."""
        a = self.ambient
        out = []
        for p in self.cones[i]:
            out.append(DefinableCone.make(self.dim, p.eq + a.eq, p.gt, p.geq + a.geq))
        return tuple(out)

    def member(self, i: int, x: Sequence) -> bool:
        return any(p.member(x) for p in self.pieces(i))

    def union_member(self, x: Sequence) -> bool:
        return any(self.member(i, x) for i in range(len(self.cones)))


@dataclass(frozen=True)
class Extraction:
    """Closed cones, each tagged with the index of the K_i containing it."""

    cones: tuple  # of (index, ConeV)

    def by_index(self, i: int) -> list:
        return [c for j, c in self.cones if j == i]

    def member(self, x: Sequence) -> bool:
        return any(c.member(x) for _, c in self.cones)

    def to_json(self) -> dict:
        return {"cones": [{"index": i, "generators": [list(g) for g in c.generators]} for i, c in self.cones]}


@dataclass(frozen=True)
class NoExtraction:
    certificate: tuple


@dataclass(frozen=True)
class Unknown:
    expended: int
    reason: str = "budget exhausted"


@dataclass(frozen=True)
class Reducible:
    witness: tuple
    extraction: Optional[Extraction] = None


@dataclass(frozen=True)
class Irreducible:
    certificate: tuple


def verdict_json(v) -> dict:
    if isinstance(v, Reducible):
        return {"verdict": "reducible", "witness": list(v.witness)}
    if isinstance(v, Irreducible):
        return {"verdict": "irreducible", "certificate": [list(c) for c in v.certificate]}
    return {"verdict": "unknown", "expended": v.expended}


# --- the sign arrangement ------------------------------------------------------------

class _Meter:
    def __init__(self, budget: int):
        self.budget = budget
        self.used = 0

    def tick(self, k: int = 1) -> None:
        self.used += k
        if self.used > self.budget:
            raise BudgetExceeded([], self.used)


@dataclass(frozen=True)
class Cell:
    """A relatively open cell {eq·x = 0, gt·x > 0} with a representative."""

    eq: tuple
    gt: tuple
    rep: tuple
    dim: int

    def in_closure(self, x: Sequence) -> bool:
        return all(dot(r, x) == 0 for r in self.eq) and all(dot(r, x) >= 0 for r in self.gt)

    def member(self, x: Sequence) -> bool:
        return all(dot(r, x) == 0 for r in self.eq) and all(dot(r, x) > 0 for r in self.gt)


def _int_point(w) -> tuple:
    den = 1
    for v in w:
        den = lcm(den, Fraction(v).denominator)
    return primitive([int(Fraction(v) * den) for v in w])


def _normals(rows: Iterable, n: int) -> list:
    out = []
    for r in rows:
        if not any(r):
            continue
        p = primitive(r)
        m = tuple(-x for x in p)
        if p not in out and m not in out:
            out.append(p)
    for i in range(n):
        u = unit(n, i)
        if u not in out and tuple(-x for x in u) not in out:
            out.append(u)
    return out


def arrangement_cells(base: DefinableCone, normals: Sequence, meter: _Meter) -> list:
    """Non-zero sign cells of ``normals`` inside ``base`` (unit normals make them pointed)."""
    n = base.dim
    normals = _normals(list(normals) + list(base.geq) + list(base.gt), n)
    out = []

    def feasible(eq, gt, geq):
        meter.tick()
        return lp_witness(gt, geq, eq, n)

    def rec(i, eq, gt, geq):
        if i == len(normals):
            if not gt:
                return
            w = feasible(eq, gt, geq)
            if w is None:
                return
            d = n - rank(list(eq)) if eq else n
            out.append(Cell(tuple(eq), tuple(gt), _int_point(w), d))
            return
        a = normals[i]
        ma = tuple(-x for x in a)
        for eq2, gt2 in ((eq + [a], gt), (eq, gt + [a]), (eq, gt + [ma])):
            if gt2 and feasible(eq2, gt2, geq) is None:
                continue
            if not gt2 and rank(eq2) == n:
                continue
            rec(i + 1, eq2, gt2, geq)

    rec(0, list(base.eq), list(base.gt), list(base.geq))
    return out


def _family_cells(fam: ConeFamily, meter: _Meter) -> list:
    rows = []
    for i in range(len(fam.cones)):
        for p in fam.pieces(i):
            rows += list(p.eq) + list(p.gt) + list(p.geq)
    return arrangement_cells(DefinableCone.from_cone(fam.ambient), rows, meter)


def _maximal_chains(cells: list, tops: list, meter: _Meter) -> Iterable[list]:
    """Chains c_1 < ... < top through every dimension, for each top cell."""
    below: dict = {}
    for i, f in enumerate(cells):
        below[i] = [j for j, g in enumerate(cells) if g.dim == f.dim - 1 and f.in_closure(g.rep)]
        meter.tick()

    def walk(i):
        if cells[i].dim == 1 or not below[i]:
            yield [i]
            return
        for j in below[i]:
            for ch in walk(j):
                yield ch + [i]

    for t in tops:
        yield from walk(t)


# --- exact checks -----------------------------------------------------------------

def open_cone(vs: Sequence[Sequence], n: int) -> DefinableCone:
    """Q>0·v_1 + ... + Q>0·v_s as a definable cone."""
    vs = [ivec(v) for v in vs if any(v)]
    if not vs:
        return DefinableCone(n, tuple(unit(n, i) for i in range(n)), (), ())
    return DefinableCone.interior_of(ConeV.make(n, vs).hrep)


def _meets(p: DefinableCone, o: DefinableCone) -> bool:
    both = DefinableCone.make(p.dim, p.eq + o.eq, p.gt + o.gt, p.geq + o.geq)
    return not both.is_trivial


def open_cone_inside(vs: Sequence[Sequence], pieces: Sequence[DefinableCone], budget: int = DEFAULT_BUDGET) -> bool:
    """Q>0·v_1 + ... ⊆ union of pieces, decided on the arrangement of the piece rows."""
    n = pieces[0].dim
    o = open_cone(vs, n)
    rows = [r for p in pieces for r in (*p.eq, *p.gt, *p.geq)]
    for c in arrangement_cells(o, rows, _Meter(budget)):
        if not any(p.member(c.rep) for p in pieces):
            return False
    return True


def cone_inside(c: ConeV, pieces: Sequence[DefinableCone], budget: int = DEFAULT_BUDGET) -> bool:
    """Closed cone c ⊆ union of pieces (plus 0): every open face of c must fit."""
    gens = list(c.hrep.vrep.generators) if c.generators else []
    for k in range(1, len(gens) + 1):
        for sub in itertools.combinations(gens, k):
            if not open_cone_inside(sub, pieces, budget):
                return False
    return True


def verify_certificate(fam: ConeFamily, vs: Sequence[Sequence], budget: int = DEFAULT_BUDGET) -> bool:
    """The failure condition: some K_i holds the full open cone, and no K_j meets every prefix."""
    n = fam.dim
    if not vs or not any(open_cone_inside(vs, fam.pieces(i), budget) for i in range(len(fam.cones))):
        return False
    prefixes = [open_cone(vs[:k], n) for k in range(1, len(vs) + 1)]
    for j in range(len(fam.cones)):
        if all(any(_meets(p, o) for p in fam.pieces(j)) for o in prefixes):
            return False
    return True


def sample_rays(amb: ConeH, bound: int) -> list:
    n = amb.dim
    out = []
    for v in itertools.product(range(-bound, bound + 1), repeat=n):
        if any(v) and primitive(v) == v and amb.member(v):
            out.append(v)
    return out


def verify_extraction(fam: ConeFamily, ext: Extraction, bound: int = 5, budget: int = DEFAULT_BUDGET) -> bool:
    """Containment exactly, coverage on all primitive rays with entries <= bound."""
    for i, c in ext.cones:
        if not cone_inside(c, fam.pieces(i), budget):
            return False
        if not all(fam.ambient.member(g) for g in c.generators):
            return False
    for v in sample_rays(fam.ambient, bound):
        if fam.union_member(v) != ext.member(v):
            return False
    return True


# --- the decision -----------------------------------------------------------------

def _memberships(fam: ConeFamily, cells: list) -> list:
    return [frozenset(i for i in range(len(fam.cones)) if fam.member(i, c.rep)) for c in cells]


def complete_extraction(fam: ConeFamily, budget: int = DEFAULT_BUDGET):
    """Extraction | NoExtraction(certificate) | Unknown."""
    meter = _Meter(budget)
    try:
        cells = _family_cells(fam, meter)
        mem = _memberships(fam, cells)
        inside = [i for i, m in enumerate(mem) if m]
        tops = [i for i in inside
                if not any(j != i and cells[j].dim > cells[i].dim and cells[j].in_closure(cells[i].rep)
                           for j in inside)]
        simplices: dict = {}
        for ch in _maximal_chains(cells, sorted(tops, key=lambda i: cells[i].rep), meter):
            meter.tick()
            common = frozenset.intersection(*(mem[i] for i in ch))
            if not common:
                return NoExtraction(tuple(cells[i].rep for i in ch))
            simplices.setdefault(min(common), []).append([cells[i].rep for i in ch])
    except BudgetExceeded:
        return Unknown(meter.used)
    out = []
    n = fam.dim
    for i in sorted(simplices):
        gens = sorted({g for s in simplices[i] for g in s})
        hull = ConeV.make(n, gens)
        hull = ConeV.make(n, hull.hrep.vrep.generators)
        if cone_inside(hull, fam.pieces(i)):
            out.append((i, hull))
        else:
            for s in sorted(simplices[i]):
                out.append((i, ConeV.make(n, s)))
    return Extraction(tuple(out))


# --- reducibility -----------------------------------------------------------------

def rep_family(rep: AlmostHybridRep) -> ConeFamily:
    """K_i = dir(P_i) ∪ interior of the common fill cone, inside that cone."""
    q = rep.fill
    interior = DefinableCone.interior_of(q.cone)
    cones = [tuple(m.directions) + (interior,) for _, m in rep.parts]
    return ConeFamily.make(cones, q.cone)


def difference_pump(model: SmoothModel, fs: Iterable[Sequence]) -> tuple:
    """d ∈ P with d + f ∈ P for every f in the group of P (P periodic)."""
    fs = [ivec(f) for f in fs if any(f)]
    q = model.fill
    if not fs:
        return pump_base(model, [])
    w = _interior_lattice_point(q)
    if not any(w):
        raise PreconditionViolated("the period has a trivial fill")
    k = 1
    while not all(model.in_directions(vadd(f, vscale(k, w))) and q.interior_member(vadd(f, vscale(k, w)))
                  for f in fs):
        k += 1
        if k > 100_000:
            raise PreconditionViolated("vectors do not enter the interior of the fill")
    nw = vscale(k, w)
    for f in fs:
        if not q.lattice.member(f):
            raise PreconditionViolated(f"{f} is not in the lattice of the period")
    x0 = pump_base(model, [nw] + [vadd(f, nw) for f in fs])
    return vadd(x0, nw)


def modulo_removal(x: Sequence, lam: int, q: FullPeriodic, period: SmoothModel) -> tuple:
    """From x + λ·Q ⊆ X to x' + Q ⊆ X, given X + period ⊆ X."""
    x = ivec(x)
    if lam <= 1:
        return x
    d = zero(len(x))
    for g in generators_of(q).generators:
        d = vadd(d, difference_pump(period, [vscale(r, g) for r in range(1, lam)]))
    return vadd(x, d)


def small_difference_pump(model: SmoothModel, fs: Sequence[Sequence], limit: int = 20_000) -> Optional[tuple]:
    """Smallest d (by coordinate sum) with d and every d + f in the model, if one is found in a box."""
    fs = [ivec(f) for f in fs]
    n = model.dim
    lo = tuple(max([0] + [-f[i] for f in fs]) for i in range(n))
    size = 2 * max([abs(v) for f in fs for v in f] + [0]) + 12
    count = 0
    for total in range(sum(lo), sum(lo) + n * size + 1):
        for d in _points_with_sum(lo, total, size):
            count += 1
            if count > limit:
                return None
            if model.member(d) and all(model.member(vadd(d, f)) for f in fs):
                return d
    return None


def _points_with_sum(lo: tuple, total: int, size: int):
    n = len(lo)
    rest = total - sum(lo)
    for parts in itertools.product(range(min(rest, size) + 1), repeat=n - 1):
        last = rest - sum(parts)
        if 0 <= last <= size:
            yield tuple(a + b for a, b in zip(lo, parts + (last,)))


def combine_bases(xs: Sequence[Sequence], period: SmoothModel) -> tuple:
    """x' with x' − x_i ∈ period for all i; then x_i + G_i ⊆ X gives x' + ⋃G_i ⊆ X."""
    xs = [ivec(x) for x in xs]
    c = xs[0]
    for x in xs[1:]:
        if not period.lattice.member(vsub(c, x)):
            raise PreconditionViolated(f"bases {c} and {x} lie in different cosets")
    fs = [vsub(c, x) for x in xs]
    # membership is exact, so a small d found by search is as good as the pumped one
    p = small_difference_pump(period, fs)
    if p is None:
        p = difference_pump(period, fs)
    return vadd(c, p)


def box_contained(rep: AlmostHybridRep, x: Sequence, q: FullPeriodic, size: int = 15) -> bool:
    n = len(x)
    for y in lattice_points_in_box(zero(n), q.lattice, zero(n), (size,) * n):
        if q.cone.member(y) and not rep.member(vadd(x, y)):
            return False
    return True


def reduction_witness(rep: AlmostHybridRep, ext: Extraction, box: int = 15) -> tuple:
    """x with x + Fill ⊆ X, assembled per extraction cone and box-checked."""
    q = rep.fill
    lat = q.lattice
    # b + F* with F* full is b + Fill(F*) already
    for b, m in rep.parts:
        if isinstance(m, GeneratorModel) and is_full(m.gp):
            return b
    period = weak_hybridization(rep).witness_period
    xs = []
    for i, c in ext.cones:
        b, model = rep.parts[i]
        fs = [vscale(lat.multiple_in(g), g) for g in c.generators]
        xp = pump_base(model, fs)
        qi = FullPeriodic.make(c.hrep, lat)
        gm = GeneratorModel(GeneratorPeriodic.make(len(b), fs))
        lam = 1
        for g in generators_of(qi).generators:
            lam *= gm.multiplier(g)
        xs.append(modulo_removal(vadd(b, xp), lam, qi, period))
    x = combine_bases(xs, period)
    if not box_contained(rep, x, q, box):
        raise WitnessVerificationFailed(f"{x} + fill is not inside the set")
    return x


def reducibility(rep: AlmostHybridRep, budget: int = DEFAULT_BUDGET, box: int = 15):
    """Reducible(witness) | Irreducible(certificate) | Unknown."""
    q = rep.fill
    if q.dim == 0:
        for b, _ in rep.parts:
            if rep.member(b):
                return Reducible(b)
        return Irreducible(())
    fam = rep_family(rep)
    res = complete_extraction(fam, budget)
    if isinstance(res, Unknown):
        return res
    if isinstance(res, NoExtraction):
        return Irreducible(res.certificate)
    return Reducible(reduction_witness(rep, res, box), res)
