"""Partitions of a semilinear region according to a set X.

X is only accessed through a provider. A provider answers, for a full linear
query region, with pieces (rep, hybridization): almost hybridlinear
representations whose union is X ∩ region, each with a full linear
hybridization. On top of that seam sit

* ``partition``: cells on which X is empty or has a weak hybridization,
* ``full_linear_refine``: full linear cells with true hybridizations,
* ``theorem1_partition``: cells classified empty / subset / irreducible,
* the semilinearity decision, the infinite-line search and the common
  partition for two sets.
"""

from __future__ import annotations

import json
from math import lcm
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    InputError,
    NotInLattice,
    PreconditionViolated,
    ProviderFailure,
    WitnessVerificationFailed,
)
from .exactla import ivec, vadd, vscale, vsub, zero
from .extraction import DEFAULT_BUDGET, Irreducible as IrreducibleVerdict, Reducible, Unknown, reducibility
from .periodic import FullPeriodic, GeneratorPeriodic, fill, lattice_points_in_box
from .semilinear import (
    HybridLinear,
    LinearSet,
    Semilinear,
    boundary,
    complement_decompose,
    dim,
    disjointify,
    linear_intersect,
    semilinear_minus,
)
from .smooth import AlmostHybridRep, CutModel, EventualSet, GeneratorModel, SmoothModel

EMPTY, SUBSET, IRREDUCIBLE, UNCLASSIFIED, WEAK = "empty", "subset", "irreducible", "unclassified", "weak"


# --- bookkeeping ------------------------------------------------------------------

class Budget:
    """Shared work counter: provider queries plus extraction steps."""

    def __init__(self, limit: int = DEFAULT_BUDGET):
        self.limit = limit
        self.spent = 0
        self.depth = 0
        self.max_depth = 0

    @property
    def left(self) -> int:
        return max(self.limit - self.spent, 0)

    def tick(self, k: int = 1) -> None:
        self.spent += k
        if self.spent > self.limit:
            raise BudgetExceeded([], self.spent)

    def enter(self) -> None:
        self.depth += 1
        self.max_depth = max(self.max_depth, self.depth)

    def leave(self) -> None:
        self.depth -= 1

    def report(self) -> dict:
        return {"limit": self.limit, "spent": self.spent, "max_depth": self.max_depth}


def _budget(b) -> Budget:
    return b if isinstance(b, Budget) else Budget(DEFAULT_BUDGET if b is None else b)


@dataclass(frozen=True)
class Classification:
    kind: str
    rep: Optional[AlmostHybridRep] = None
    certificate: tuple = ()
    witness: Optional[tuple] = None
    reason: str = ""

    def to_json(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.rep is not None:
            d["rep"] = self.rep.to_json()
        if self.kind == IRREDUCIBLE:
            d["certificate"] = [list(v) for v in self.certificate]
        if self.witness is not None:
            d["witness"] = list(self.witness)
        if self.reason:
            d["reason"] = self.reason
        return d


def Empty() -> Classification:
    return Classification(EMPTY)


def Subset(witness=None) -> Classification:
    return Classification(SUBSET, witness=witness)


@dataclass(frozen=True)
class PartitionCell:
    """A region with its classification; ``second`` is used by common partitions."""

    region: object  # LinearSet, or HybridLinear during the first stage
    classification: Classification
    second: Optional[Classification] = None

    @property
    def kind(self) -> str:
        return self.classification.kind

    def member(self, x: Sequence) -> bool:
        return self.region.member(x)

    def to_json(self) -> dict:
        d = {"region": self.region.to_json(), "classification": self.classification.to_json()}
        if self.second is not None:
            d["second"] = self.second.to_json()
        return d


def _signature(cell: PartitionCell) -> str:
    return json.dumps(cell.region.to_json(), sort_keys=True)


@dataclass(frozen=True)
class PartitionResult:
    cells: tuple
    ambient: Semilinear
    budget_report: dict = field(default_factory=dict)
    certified: bool = True

    def kinds(self) -> list:
        return [c.kind for c in self.cells]

    def to_json(self) -> dict:
        return {"ambient": self.ambient.to_json(), "certified": self.certified,
                "budget": self.budget_report, "cells": [c.to_json() for c in self.cells]}


def _result(cells: Iterable[PartitionCell], s: Semilinear, budget: Budget, certified: bool) -> PartitionResult:
    return PartitionResult(tuple(sorted(cells, key=_signature)), s, budget.report(), certified)


# --- providers --------------------------------------------------------------------

class HybridizationProvider:
    """Access to X: pieces per region, containment witnesses and membership."""

    certified = True
    dim = 0

    def decompose(self, region: LinearSet) -> list:
        raise NotImplementedError

    def membership(self, x: Sequence) -> bool:
        raise NotImplementedError

    def reducibility(self, region: LinearSet, pieces: list, budget: int = DEFAULT_BUDGET):
        rep = _combine(region, pieces)
        return reducibility(rep, budget)

    def line_cells(self, region: LinearSet) -> Optional[list]:
        """Exact (cell, inside) pairs covering a region of dimension <= 1, or None."""
        return None

    def find_contained_shift(self, region: LinearSet, budget: int = DEFAULT_BUDGET) -> Optional[tuple]:
        """x with x + region.periodic ⊆ X ∩ region, or None."""
        pieces = self.decompose(region)
        if not pieces:
            return None
        v = self.reducibility(region, pieces, budget)
        return v.witness if isinstance(v, Reducible) else None


def _combine(region: LinearSet, pieces: list) -> AlmostHybridRep:
    q = region.periodic
    parts = []
    for rep, hyb in pieces:
        if not hyb.periodic.same_set(q):
            raise ProviderFailure("a piece has a hybridization other than the region")
        parts += list(rep.parts)
    return AlmostHybridRep.make(parts)


def shift_line(es: EventualSet, k0: int) -> EventualSet:
    """{k + k0 : k ∈ es}."""
    if k0 == 0:
        return es
    m = es.period
    return EventualSet(es.threshold + k0, m, frozenset(k + k0 for k in es.finite),
                       frozenset((r + k0) % m for r in es.residues))


def line_profile(model: SmoothModel, c: Sequence, g: Sequence) -> Optional[EventualSet]:
    """{k : c + k·g ∈ model} for a non-negative step g; c may have negative entries."""
    k0 = 0
    for ci, gi in zip(c, g):
        if ci < 0:
            if gi <= 0:
                return None
            k0 = max(k0, -(ci // gi))
    start = vadd(c, vscale(k0, g))
    try:
        es = model.line_set(start, g)
    except NotImplementedError as e:
        raise ProviderFailure(str(e)) from None
    return shift_line(es, k0)


def _point_piece(x: tuple) -> tuple:
    n = len(x)
    return AlmostHybridRep.make([(x, GeneratorModel.of(n, []))]), LinearSet(x, FullPeriodic.zero(n))


def _ray_piece(x: tuple, d: tuple) -> tuple:
    n = len(x)
    gm = GeneratorModel.of(n, [d])
    return AlmostHybridRep.make([(x, gm)]), LinearSet(x, fill(gm.gp))


def _line_pieces(b: tuple, model: SmoothModel, region: LinearSet) -> list:
    """Exact pieces of (b + model) ∩ region for a region of dimension at most one."""
    c, q = region.base, region.periodic
    if q.dim == 0:
        return [_point_piece(c)] if model.member(vsub(c, b)) else []
    g = q.generators[0]
    es = line_profile(model, vsub(c, b), g)
    if es is None or es.is_empty:
        return []
    tails = []
    for start, step in es.tails():
        while start - step >= 0 and es.member(start - step):
            start -= step
        tails.append((start, step))
    covered = lambda k: any(k >= t and (k - t) % m == 0 for t, m in tails)
    out = [_point_piece(vadd(c, vscale(k, g))) for k in sorted(es.finite) if not covered(k)]
    for start, step in tails:
        out.append(_ray_piece(vadd(c, vscale(start, g)), vscale(step, g)))
    return out


def _union_runs(profiles: list) -> list:
    """(start, step, inside) runs partitioning N by membership in the union of the profiles.

    step 0 is a single point. Beyond the common threshold membership depends
    only on k mod the common period; each such class becomes one run, pulled
    back as far as membership stays the same.
    """
    t = max([es.threshold for es in profiles], default=0)
    m = lcm(*[es.period for es in profiles]) if profiles else 1
    inside = lambda k: any(es.member(k) for es in profiles)
    runs, cut = [], {}
    for r in range(m):
        k = t + r
        v = inside(k)
        while k - m >= 0 and inside(k - m) == v:
            k -= m
        runs.append((k, m, v))
        cut[r] = k
    for k in range(t):
        if k < cut[(k - t) % m]:
            runs.append((k, 0, inside(k)))
    return sorted(runs)


def _scaled(q: FullPeriodic, step: int) -> FullPeriodic:
    if step == 0:
        return FullPeriodic.zero(q.dim_ambient)
    return fill(GeneratorPeriodic.make(q.dim_ambient, [vscale(step, q.generators[0])]))


class AnnotatedProvider(HybridizationProvider):
    """X = ⋃ b_j + P_j given by catalog models; every answer is exact."""

    certified = True

    def __init__(self, parts: Iterable[tuple], name: str = ""):
        self.parts = tuple((ivec(b), m) for b, m in parts)
        if not self.parts:
            raise InputError("a provider needs at least one part")
        self.dim = self.parts[0][1].dim
        for b, m in self.parts:
            if m.dim != self.dim or len(b) != self.dim:
                raise DimensionMismatch("parts live in different dimensions")
        self.name = name

    @staticmethod
    def of_rep(rep: AlmostHybridRep, name: str = "") -> "AnnotatedProvider":
        return AnnotatedProvider(rep.parts, name)

    def membership(self, x):
        return any(m.member(vsub(x, b)) for b, m in self.parts)

    def decompose(self, region: LinearSet) -> list:
        out = []
        for b, m in self.parts:
            out += self._pieces(b, m, region)
        return out

    def line_cells(self, region):
        c, q = region.base, region.periodic
        if q.dim == 0:
            return [(region, self.membership(c))]
        if q.dim > 1:
            return None
        g = q.generators[0]
        try:
            profiles = [line_profile(m, vsub(c, b), g) for b, m in self.parts]
        except (ProviderFailure, BudgetExceeded):
            return None
        profiles = [es for es in profiles if es is not None and not es.is_empty]
        return [(LinearSet(vadd(c, vscale(k, g)), _scaled(q, step)), inside)
                for k, step, inside in _union_runs(profiles)]

    def _pieces(self, b, m, region):
        if region.periodic.dim <= 1:
            return _line_pieces(b, m, region)
        fp = m.fill
        h = linear_intersect(LinearSet(b, fp), region)
        if h.is_empty:
            return []
        qq = h.periodic
        if qq.dim == fp.dim:
            out = []
            for f in h.bases:
                if f == b and qq.same_set(fp):
                    piece = m
                elif isinstance(m, CutModel):
                    piece = CutModel(m.inner, vadd(m.shift, vsub(f, b)), qq)
                else:
                    piece = CutModel(m, vsub(f, b), qq)
                out.append((AlmostHybridRep.make([(f, piece)]), LinearSet(f, qq)))
            return out
        if qq.dim <= 1:
            out = []
            for f in h.bases:
                out += _line_pieces(b, m, LinearSet(f, qq))
            return out
        raise ProviderFailure(f"the region meets a part in a thin set of dimension {qq.dim}")


class BoxHeuristicProvider(HybridizationProvider):
    """X known only by membership; answers are fitted on a box and not certified.

    Pieces are b + G* where G collects the small periods of the region that
    are consistent with every box point and b ranges over the box points of X
    not reachable from another one. The fit is box-equal to X by construction.
    """

    certified = False

    def __init__(self, member_fn: Callable, dim: int, box: int = 12, period_size: int = 2, max_bases: int = 64):
        self.member_fn = member_fn
        self.dim = dim
        self.box = box
        self.period_size = period_size
        self.max_bases = max_bases

    def membership(self, x):
        return bool(self.member_fn(tuple(x)))

    def _points(self, region: LinearSet) -> list:
        return [x for x in region.enumerate_box(self.box) if self.membership(x)]

    def decompose(self, region: LinearSet) -> list:
        pts = self._points(region)
        if not pts:
            return []
        n = self.dim
        inbox = set(pts)
        q = region.periodic
        cands = []
        for g in lattice_points_in_box(zero(n), q.lattice, zero(n), (self.period_size,) * n):
            if not any(g) or not q.cone.member(g):
                continue
            if all(vadd(x, g) in inbox for x in pts if max(vadd(x, g)) <= self.box):
                cands.append(g)
        gens = []
        for g in sorted(cands, key=lambda v: (sum(v), v)):
            if not GeneratorPeriodic.make(n, gens).member(g):
                gens.append(g)
        bases = [x for x in pts if not any(vsub(x, g) in inbox for g in gens)]
        if len(bases) > self.max_bases:
            raise ProviderFailure(f"{len(bases)} base points; the box data fits no small description")
        gm = GeneratorModel.of(n, gens)
        hyb_q = fill(gm.gp)
        return [(AlmostHybridRep.make([(b, gm)]), LinearSet(b, hyb_q)) for b in bases]

    def reducibility(self, region, pieces, budget=DEFAULT_BUDGET):
        x = self.find_contained_shift(region, budget)
        if x is None:
            return Unknown(0, "no contained shift inside the box")
        return Reducible(x)

    def find_contained_shift(self, region, budget=DEFAULT_BUDGET):
        q = region.periodic
        half = self.box // 2
        n = self.dim
        probe = [y for y in lattice_points_in_box(zero(n), q.lattice, zero(n), (half,) * n) if q.cone.member(y)]
        for x in sorted(region.enumerate_box(half), key=lambda v: (sum(v), v)):
            if all(self.membership(vadd(x, y)) for y in probe):
                return x
        return None


# --- stage one: weak hybridizations (Partition) -----------------------------------

def _intersect_hybrid(h: HybridLinear, l: LinearSet) -> HybridLinear:
    bases, q = [], None
    for b in h.bases:
        part = linear_intersect(LinearSet(b, h.periodic), l)
        q = part.periodic if q is None or part.bases else q
        bases += list(part.bases)
    if q is None:
        q = linear_intersect(LinearSet(zero(h.dim_ambient), h.periodic), l).periodic
    uniq = []
    for b in sorted(set(bases), key=lambda v: (sum(v), v)):
        if not any(q.member(vsub(b, u)) for u in uniq):
            uniq.append(b)
    return HybridLinear(h.dim_ambient, tuple(uniq), q)


def _as_semilinear(region) -> Semilinear:
    if isinstance(region, Semilinear):
        return region
    if isinstance(region, HybridLinear):
        return region.to_semilinear()
    return Semilinear.of(region.dim_ambient, [region])


def partition(provider: HybridizationProvider, s, budget=None) -> PartitionResult:
    """Cells on which X is empty or has the cell as weak hybridization."""
    b = _budget(budget)
    s = _as_semilinear(s)
    cells = _partition(provider, s, b)
    return _result(cells, s, b, provider.certified)


def _partition(provider, s: Semilinear, b: Budget) -> list:
    if s.is_empty:
        return []
    comps = disjointify(s).components
    if len(comps) > 1:
        out = []
        for c in comps:
            out += _partition(provider, Semilinear.of(s.dim_ambient, [c]), b)
        return out
    region = comps[0]
    b.enter()
    try:
        b.tick()
        if region.dim <= 1:
            direct = provider.line_cells(region)
            if direct is not None:
                b.tick(len(direct))
                return [PartitionCell(l, Subset(l.base) if inside else Empty()) for l, inside in direct]
        pieces = provider.decompose(region)
        if not pieces:
            return [PartitionCell(region, Empty())]
        ls = []
        for _, hyb in pieces:
            if hyb not in ls:
                ls.append(hyb)
        ks = [complement_decompose(l, Semilinear.of(s.dim_ambient, [region])) for l in ls]
        d = region.dim
        out = []
        start = HybridLinear(s.dim_ambient, (region.base,), region.periodic)
        for cur, chosen in _tuples(start, ls, ks, b):
            if dim(cur) < d:
                out += _partition(provider, cur.to_semilinear(), b)
            elif not chosen:
                out += [PartitionCell(c, Empty()) for c in disjointify(cur.to_semilinear()).components]
            else:
                reps = [r for r, hyb in pieces if ls.index(hyb) in chosen]
                out.append(PartitionCell(cur, Classification(WEAK, rep=_merge_reps(reps))))
        return out
    finally:
        b.leave()


def _merge_reps(reps: list) -> Optional[AlmostHybridRep]:
    parts = [p for r in reps for p in r.parts]
    return AlmostHybridRep(tuple(parts)) if parts else None


def _tuples(start: HybridLinear, ls: list, ks: list, b: Budget):
    """S ∩ M_1 ∩ ... ∩ M_r over all choices M_i ∈ {L_i} ∪ K_i, pruning empty prefixes."""

    def rec(i, cur, chosen):
        if cur.is_empty:
            return
        if i == len(ls):
            yield cur, chosen
            return
        for j, m in enumerate([ls[i]] + list(ks[i])):
            b.tick()
            nxt = _intersect_hybrid(cur, m)
            yield from rec(i + 1, nxt, chosen + (i,) if j == 0 else chosen)

    yield from rec(0, start, ())


# --- stage two: full linear cells -------------------------------------------------

def full_linear_refine(provider: HybridizationProvider, part: PartitionResult, budget=None) -> PartitionResult:
    """Split every weak cell into full linear cells that are true hybridizations."""
    b = _budget(budget)
    out = []
    for cell in part.cells:
        out += _refine_cell(provider, cell, b)
    return _result(out, part.ambient, b, part.certified and provider.certified)


def _refine_cell(provider, cell: PartitionCell, b: Budget) -> list:
    r = cell.region
    if isinstance(r, LinearSet):
        return [cell]
    if cell.kind == EMPTY:
        return [PartitionCell(c, cell.classification) for c in disjointify(r.to_semilinear()).components]
    if len(r.bases) == 1:
        return [PartitionCell(LinearSet(r.bases[0], r.periodic), cell.classification)]
    q = r.periodic
    reps = []
    for c in r.bases:
        if not any(q.lattice.member(vsub(c, u)) for u in reps):
            reps.append(c)
    out = [PartitionCell(LinearSet(c, q), cell.classification) for c in reps]
    rest = semilinear_minus(r.to_semilinear(), Semilinear.of(r.dim_ambient, [LinearSet(c, q) for c in reps]))
    if not rest.is_empty:
        b.enter()
        try:
            for c in _partition(provider, rest, b):
                out += _refine_cell(provider, c, b)
        finally:
            b.leave()
    return out


def full_linear_partition(provider, s, budget=None) -> PartitionResult:
    b = _budget(budget)
    s = _as_semilinear(s)
    out = []
    for c in _partition(provider, s, b):
        out += _refine_cell(provider, c, b)
    return _result(out, s, b, provider.certified)


# --- stage three: classification -------------------------------------------------

def classify_region(provider: HybridizationProvider, region: LinearSet, b: Budget) -> Classification:
    """Empty | Subset | Irreducible | Unclassified, or "reducible" carrying a witness."""
    b.tick()
    try:
        pieces = provider.decompose(region)
        if not pieces:
            return Empty()
        rep = _combine(region, pieces) if provider.certified else _merge_reps([r for r, _ in pieces])
        v = provider.reducibility(region, pieces, b.left)
    except (ProviderFailure, PreconditionViolated, WitnessVerificationFailed, NotInLattice,
            DimensionMismatch, InputError) as e:
        return Classification(UNCLASSIFIED, reason=f"{type(e).__name__}: {e}")
    if isinstance(v, Unknown):
        b.spent += v.expended
        return Classification(UNCLASSIFIED, rep=rep, reason=v.reason)
    if isinstance(v, IrreducibleVerdict):
        return Classification(IRREDUCIBLE, rep=rep, certificate=tuple(v.certificate))
    x = tuple(v.witness)
    if x == tuple(region.base):
        return Subset(x)
    return Classification("reducible", rep=rep, witness=x)


def theorem1_partition(provider: HybridizationProvider, s, budget=None) -> PartitionResult:
    """Disjoint full linear cells, each empty, contained in X, or irreducible."""
    b = _budget(budget)
    s = _as_semilinear(s)
    return _result(_theorem1(provider, s, b), s, b, provider.certified)


def _theorem1(provider, s: Semilinear, b: Budget) -> list:
    out = []
    b.enter()
    try:
        cells = []
        for c in _partition(provider, s, b):
            cells += _refine_cell(provider, c, b)
        for cell in cells:
            if cell.kind in (EMPTY, SUBSET):
                out.append(cell)
                continue
            region = cell.region
            cl = classify_region(provider, region, b)
            if cl.kind != "reducible":
                out.append(PartitionCell(region, cl))
                continue
            inner = LinearSet(cl.witness, region.periodic)
            out.append(PartitionCell(inner, Subset(cl.witness)))
            rest = semilinear_minus(Semilinear.of(s.dim_ambient, [region]), Semilinear.of(s.dim_ambient, [inner]))
            if not rest.is_empty:
                out += _theorem1(provider, rest, b)
    finally:
        b.leave()
    return out


# --- consequences ------------------------------------------------------------------

@dataclass(frozen=True)
class IsSemilinear:
    representation: Semilinear
    partition: PartitionResult


@dataclass(frozen=True)
class NotSemilinear:
    cell: PartitionCell
    partition: PartitionResult


@dataclass(frozen=True)
class UnknownResult:
    reason: str
    partition: Optional[PartitionResult] = None


def semilinearity_decide(provider: HybridizationProvider, s=None, budget=None):
    """IsSemilinear(X ∩ s) | NotSemilinear(cell) | UnknownResult."""
    if s is None:
        s = Semilinear.universe(provider.dim)
    try:
        res = theorem1_partition(provider, s, budget)
    except BudgetExceeded as e:
        return UnknownResult(f"budget exhausted after {e.expended}")
    for c in res.cells:
        if c.kind == IRREDUCIBLE:
            return NotSemilinear(c, res)
    bad = [c for c in res.cells if c.kind not in (EMPTY, SUBSET)]
    if bad:
        return UnknownResult(bad[0].classification.reason or "unclassified cell", res)
    comps = [c.region for c in res.cells if c.kind == SUBSET]
    return IsSemilinear(Semilinear.of(res.ambient.dim_ambient, comps), res)


@dataclass(frozen=True)
class Line:
    """base + N·direction."""

    base: tuple
    direction: tuple

    def point(self, k: int) -> tuple:
        return vadd(self.base, vscale(k, self.direction))

    def member(self, x: Sequence) -> bool:
        ks = {(a - b) // d for a, b, d in zip(x, self.base, self.direction) if d}
        return len(ks) == 1 and (k := ks.pop()) >= 0 and tuple(x) == self.point(k)

    def to_json(self) -> dict:
        return {"type": "line", "base": list(self.base), "direction": list(self.direction)}


@dataclass(frozen=True)
class NotInfinite:
    partition: PartitionResult


def verify_line(provider, s: Semilinear, line: Line, count: int = 100) -> bool:
    return all(s.member(line.point(k)) and not provider.membership(line.point(k)) for k in range(count))


def find_infinite_line(provider: HybridizationProvider, s=None, budget=None):
    """Line ⊆ s \\ X when that difference is infinite; NotInfinite; or UnknownResult."""
    if s is None:
        s = Semilinear.universe(provider.dim)
    s = _as_semilinear(s)
    b = _budget(budget)
    try:
        return _find_line(provider, s, b)
    except BudgetExceeded as e:
        return UnknownResult(f"budget exhausted after {e.expended}")


def _find_line(provider, s: Semilinear, b: Budget):
    cells = _theorem1(provider, s, b)
    res = _result(cells, s, b, provider.certified)
    for c in res.cells:
        if c.kind == EMPTY and c.region.dim >= 1:
            line = Line(tuple(c.region.base), tuple(c.region.periodic.generators[0]))
            if not verify_line(provider, s, line):
                raise WitnessVerificationFailed(f"{line} meets X")
            return line
    unsure = None
    for c in res.cells:
        if c.kind == IRREDUCIBLE:
            sub = _find_line(provider, boundary(c.region), b)
            if isinstance(sub, Line):
                return sub
            unsure = UnknownResult("an irreducible cell has a finite boundary complement", res)
        elif c.kind == UNCLASSIFIED:
            unsure = UnknownResult(c.classification.reason or "unclassified cell", res)
    return unsure or NotInfinite(res)


def common_partition(p1: HybridizationProvider, p2: HybridizationProvider, s=None, budget=None) -> PartitionResult:
    """One disjoint full linear cover classified for both sets."""
    if s is None:
        s = Semilinear.universe(p1.dim)
    s = _as_semilinear(s)
    b = _budget(budget)
    cells = _common(p1, p2, s, b)
    return _result(cells, s, b, p1.certified and p2.certified)


def _common(p1, p2, s: Semilinear, b: Budget) -> list:
    out = []
    b.enter()
    try:
        for c1 in _theorem1(p1, s, b):
            sub = _theorem1(p2, Semilinear.of(s.dim_ambient, [c1.region]), b)
            if c1.kind != IRREDUCIBLE:
                out += [PartitionCell(c.region, c1.classification, c.classification) for c in sub]
                continue
            d = c1.region.dim
            for c2 in sub:
                r = c2.region
                if r.dim < d:
                    out += _common(p1, p2, Semilinear.of(s.dim_ambient, [r]), b)
                    continue
                cl = classify_region(p1, r, b)
                if cl.kind != "reducible":
                    out.append(PartitionCell(r, cl, c2.classification))
                    continue
                inner = LinearSet(cl.witness, r.periodic)
                for c in _theorem1(p2, Semilinear.of(s.dim_ambient, [inner]), b):
                    out.append(PartitionCell(c.region, Subset(cl.witness), c.classification))
                rest = semilinear_minus(Semilinear.of(s.dim_ambient, [r]), Semilinear.of(s.dim_ambient, [inner]))
                if not rest.is_empty:
                    out += _common(p1, p2, rest, b)
    finally:
        b.leave()
    return out


def result_json(v) -> dict:
    if isinstance(v, PartitionResult):
        return v.to_json()
    if isinstance(v, IsSemilinear):
        return {"verdict": "semilinear", "representation": v.representation.to_json(),
                "partition": v.partition.to_json()}
    if isinstance(v, NotSemilinear):
        return {"verdict": "not_semilinear", "cell": v.cell.to_json(), "partition": v.partition.to_json()}
    if isinstance(v, Line):
        return {"verdict": "line", "line": v.to_json()}
    if isinstance(v, NotInfinite):
        return {"verdict": "finite", "partition": v.partition.to_json()}
    d = {"verdict": "unknown", "reason": v.reason}
    if v.partition is not None:
        d["partition"] = v.partition.to_json()
    return d
