"""Smooth periodic sets given by a vetted catalog of symbolic models.

A model couples an exact membership test with hand-derived data: the cone of
directions (as a union of DefinableCone pieces), the lattice, a pump
(x with x + F* inside the set) and a line witness (x, m) with x + N·m·d
inside the set. Each catalog entry documents why its witnesses are valid.

Most models are periodic. A few are only "pure": they are not closed under
addition, but they come with a periodic ``period_model`` R such that
Y + R ⊆ Y and both sets have the same fill.

``line_set(c, g)`` describes K = {k ∈ N : c + k·g ∈ Y} exactly as an
eventually periodic set. Decomposition uses it for one-dimensional regions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from math import comb, gcd, lcm
from typing import Iterable, Optional, Sequence

from .cones import ConeH, ConeV, DefinableCone
from .errors import (
    BudgetExceeded,
    DimensionMismatch,
    InputError,
    NotInLattice,
    PreconditionViolated,
)
from .exactla import (
    DiophantineSystem,
    _fm_eliminate,
    dot,
    int_solve,
    ivec,
    minimal_nonneg_solutions,
    polyhedron_witness,
    transpose,
    unit,
    vadd,
    vscale,
    vsub,
    zero,
)
from .periodic import FullPeriodic, GeneratorPeriodic, Lattice, finite_pump, intersect_full

LINE_CAP = 200_000


# --- eventually periodic subsets of N ---------------------------------------------

@dataclass(frozen=True)
class EventualSet:
    """K ⊆ N: explicit below ``threshold``; from there on k ∈ K iff k % period in residues."""

    threshold: int
    period: int
    finite: frozenset
    residues: frozenset

    def member(self, k: int) -> bool:
        if k < 0:
            return False
        if k < self.threshold:
            return k in self.finite
        return k % self.period in self.residues

    @property
    def is_empty(self) -> bool:
        return not self.finite and not self.residues

    @property
    def is_finite(self) -> bool:
        return not self.residues

    def tails(self) -> list:
        """Arithmetic progressions (start, step) covering K beyond the threshold."""
        t, m = self.threshold, self.period
        return sorted((t + (r - t) % m, m) for r in self.residues)

    def intersect(self, other: "EventualSet") -> "EventualSet":
        t = max(self.threshold, other.threshold)
        m = lcm(self.period, other.period)
        fin = frozenset(k for k in range(t) if self.member(k) and other.member(k))
        res = frozenset(r for r in range(m)
                        if self.member(t + (r - t) % m) and other.member(t + (r - t) % m))
        return EventualSet(t, m, fin, res)

    def elements_below(self, bound: int) -> list:
        return [k for k in range(bound) if self.member(k)]

    @staticmethod
    def from_threshold(pred, t: int) -> "EventualSet":
        """K eventually constant from t on."""
        if t > LINE_CAP:
            raise BudgetExceeded([], t)
        fin = frozenset(k for k in range(t) if pred(k))
        return EventualSet(t, 1, fin, frozenset({0}) if pred(t) else frozenset())

    @staticmethod
    def interval(lo: int, hi: Optional[int]) -> "EventualSet":
        """{lo, ..., hi}; hi None means unbounded."""
        lo = max(lo, 0)
        if hi is None:
            return EventualSet(lo, 1, frozenset(), frozenset({0}))
        if hi < lo:
            return EventualSet(0, 1, frozenset(), frozenset())
        if hi + 1 > LINE_CAP:
            raise BudgetExceeded([], hi)
        return EventualSet(hi + 1, 1, frozenset(range(lo, hi + 1)), frozenset())


def _first_true(pred, lo: int) -> int:
    """Least k >= lo with pred(k), for pred monotone false-then-true on [lo, ∞)."""
    if pred(lo):
        return lo
    step = 1
    hi = lo + 1
    while not pred(hi):
        lo = hi
        step *= 2
        hi = lo + step
        if step > 1 << 64:
            raise BudgetExceeded([], hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _poly_linear(coeffs: Sequence[int], c: int, g: int) -> list:
    """Coefficients in k of q(c + k·g), low degree first."""
    out = [0] * max(len(coeffs), 1)
    for j, a in enumerate(coeffs):
        if not a:
            continue
        for i in range(j + 1):
            out[i] += a * comb(j, i) * c ** (j - i) * g ** i
    return out


def _poly_threshold(h: Sequence[int]) -> int:
    """k beyond which the sign of h(k) is constant (Cauchy root bound)."""
    h = list(h)
    while h and h[-1] == 0:
        h.pop()
    if len(h) <= 1:
        return 0
    lead = abs(h[-1])
    return 2 + max(abs(a) for a in h[:-1]) // lead


def _rational_combination(gens: Sequence, d: Sequence) -> Optional[list]:
    """Non-negative rational λ with Σ λ_j g_j = d, or None."""
    m, n = len(gens), len(d)
    if m == 0:
        return [] if not any(d) else None
    rows = [(unit(m, j), 0, False) for j in range(m)]
    for i in range(n):
        a = tuple(g[i] for g in gens)
        rows.append((a, d[i], False))
        rows.append((tuple(-x for x in a), -d[i], False))
    return polyhedron_witness(rows, m)


def _full_line_set(q: FullPeriodic, c: Sequence, g: Sequence) -> EventualSet:
    """{k : c + k·g ∈ q}: a cone interval intersected with a lattice progression."""
    lo, hi = 0, None
    rows = [(r, False) for r in q.cone.geq] + [(r, True) for r in q.cone.eq]
    for r, is_eq in rows:
        a, b = dot(r, c), dot(r, g)
        if is_eq:
            if b == 0:
                if a != 0:
                    return EventualSet.interval(1, 0)
                continue
            if (-a) % b:
                return EventualSet.interval(1, 0)
            k = -a // b
            lo, hi = max(lo, k), k if hi is None else min(hi, k)
            continue
        # a + k·b >= 0
        if b > 0:
            lo = max(lo, -(a // b) if a < 0 else 0)
        elif b < 0:
            bound = a // (-b)
            hi = bound if hi is None else min(hi, bound)
        elif a < 0:
            return EventualSet.interval(1, 0)
    if hi is not None and hi < lo:
        return EventualSet.interval(1, 0)
    try:
        m = q.lattice.multiple_in(g) if any(g) else 1
    except NotInLattice:
        m = None
    if m is None:
        # g leaves the span of the lattice, so at most one k can hit it
        eqs, _ = q.lattice.congruence_form
        u = next(u for u in eqs if dot(u, g) != 0)
        num, den = -dot(u, c), dot(u, g)
        if num % den:
            return EventualSet.interval(1, 0)
        k = num // den
        ok = k >= lo and (hi is None or k <= hi) and q.member(vadd(c, vscale(k, g)))
        return EventualSet.interval(k, k) if ok else EventualSet.interval(1, 0)
    res = frozenset(r for r in range(m) if q.lattice.member(vadd(c, vscale(r, g))))
    if hi is None:
        t = lo
        fin = frozenset()
        return EventualSet(t, m, fin, res)
    if hi + 1 > LINE_CAP:
        raise BudgetExceeded([], hi)
    return EventualSet(hi + 1, 1, frozenset(k for k in range(lo, hi + 1) if k % m in res), frozenset())


def _rows_piece(n: int, eq=(), gt=(), geq=()) -> DefinableCone:
    return DefinableCone.make(n, eq, gt, geq)


def _nonneg_rows(n: int) -> list:
    return [unit(n, i) for i in range(n)]


def _bl(v: int) -> int:
    return v.bit_length() if v > 0 else 0


def _le_pow2(v: int, e: int, offset: int) -> bool:
    """v <= 2^e + offset for offset in {-1, 0}, without forming 2^e."""
    if offset == 0:
        return v <= 1 or _bl(v - 1) <= e
    return v <= 0 or _bl(v) <= e


# --- the model interface ---------------------------------------------------------

class SmoothModel:
    """Base class; subclasses are frozen dataclasses."""

    kind = "abstract"
    periodic = True

    @property
    def dim(self) -> int:
        raise NotImplementedError

    def member(self, x: Sequence) -> bool:
        if len(x) != self.dim or any(v < 0 for v in x):
            return False
        return self._member(tuple(x))

    def __contains__(self, x) -> bool:
        return self.member(x)

    def _member(self, x: tuple) -> bool:
        raise NotImplementedError

    @property
    def directions(self) -> tuple:
        raise NotImplementedError

    @property
    def lattice(self) -> Lattice:
        return Lattice.full(self.dim)

    def in_directions(self, d: Sequence) -> bool:
        return not any(d) or any(p.member(d) for p in self.directions)

    def line_witness(self, d: Sequence) -> tuple:
        raise NotImplementedError

    def pump_base_fn(self, fs: list) -> tuple:
        raise NotImplementedError

    def line_set(self, c: Sequence, g: Sequence) -> EventualSet:
        return EventualSet.from_threshold(lambda k: self.member(vadd(c, vscale(k, g))),
                                          self._line_threshold(tuple(c), tuple(g)))

    def _line_threshold(self, c: tuple, g: tuple) -> int:
        raise NotImplementedError(f"no line analysis for {self.kind}")

    def period_model(self) -> "SmoothModel":
        return self

    @cached_property
    def fill(self) -> FullPeriodic:
        gens = []
        for p in self.directions:
            if not p.is_trivial:
                gens += list(p.closure().vrep.generators)
        cone = ConeV.make(self.dim, gens).hrep if gens else ConeH.zero(self.dim)
        return FullPeriodic.make(cone, self.lattice)

    def to_json(self) -> dict:
        raise NotImplementedError


def _dir_piece_member(pieces: Iterable[DefinableCone], d) -> bool:
    return not any(d) or any(p.member(d) for p in pieces)


# --- catalog entries ------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorModel(SmoothModel):
    """F* for a finite F ⊆ N^n (the semilinear entry of the catalog)."""

    gp: GeneratorPeriodic
    kind = "generators"

    @staticmethod
    def of(dim: int, gens: Iterable[Sequence]) -> "GeneratorModel":
        return GeneratorModel(GeneratorPeriodic.make(dim, gens))

    @property
    def dim(self) -> int:
        return self.gp.dim

    def _member(self, x):
        return self.gp.member(x)

    @cached_property
    def directions(self) -> tuple:
        return (DefinableCone.from_cone(self.gp.cone),)

    @property
    def lattice(self) -> Lattice:
        return self.gp.lattice

    def multiplier(self, d: Sequence) -> int:
        """Least m >= 1 with m·d ∈ F*."""
        lam = _rational_combination(self.gp.generators, d)
        if lam is None:
            raise PreconditionViolated(f"{tuple(d)} is not in the cone of the generators")
        den = reduce(lcm, (Fraction(x).denominator for x in lam), 1)
        for m in range(1, den + 1):
            if den % m == 0 and self.gp.member(vscale(m, d)):
                return m
        return den

    def line_witness(self, d):
        return zero(self.dim), self.multiplier(d)

    def pump_base_fn(self, fs):
        # a·f splits into a multiple of D_f·f ∈ F* plus r·f with r < D_f
        x = zero(self.dim)
        for f in fs:
            if not any(f):
                continue
            dm = self.multiplier(f)
            x = vadd(x, finite_pump(self.gp, [vscale(r, f) for r in range(dm)]))
        return x

    def line_set(self, c, g, budget: int = 100_000) -> EventualSet:
        c, g = ivec(c), ivec(g)
        gens = list(self.gp.generators)
        n = self.dim
        if not gens:
            if not any(g):
                full = frozenset({0}) if not any(c) else frozenset()
                return EventualSet(0, 1, frozenset(), full)
            return EventualSet.interval(0, 0) if not any(c) else EventualSet.interval(1, 0)
        if not any(g):
            ok = self.gp.member(c)
            return EventualSet(0, 1, frozenset(), frozenset({0}) if ok else frozenset())
        a = [[f[i] for f in gens] + [-g[i]] for i in range(n)]
        hom = minimal_nonneg_solutions(DiophantineSystem.of(a), budget)
        inh = minimal_nonneg_solutions(DiophantineSystem.of(a, c), budget) if any(c) else [zero(len(gens) + 1)]
        if not inh:
            return EventualSet.interval(1, 0)
        steps = sorted({h[-1] for h in hom if h[-1] > 0})
        starts = sorted({s[-1] for s in inh})
        if not steps:
            return EventualSet(max(starts) + 1, 1, frozenset(starts), frozenset())
        p = steps[0]
        dist = [None] * p
        dist[0] = 0
        changed = True
        while changed:
            changed = False
            for r in range(p):
                if dist[r] is None:
                    continue
                for s in steps:
                    v = dist[r] + s
                    if dist[v % p] is None or v < dist[v % p]:
                        dist[v % p] = v
                        changed = True
        kmin: dict = {}
        for s in starts:
            for t in range(p):
                if dist[t] is None:
                    continue
                v = s + dist[t]
                if v % p not in kmin or v < kmin[v % p]:
                    kmin[v % p] = v
        t = max(kmin.values()) + 1
        fin = frozenset(k for k in range(t) if k % p in kmin and k >= kmin[k % p])
        return EventualSet(t, p, fin, frozenset(kmin))

    def to_json(self):
        return {"type": "smooth", "kind": "generators", "dim": self.dim,
                "generators": [list(g) for g in self.gp.generators]}


@dataclass(frozen=True)
class ParabolaModel(SmoothModel):
    """{x : x[axis_y] <= q(x[axis_x])}, q with non-negative integer coefficients and q(0) = 0.

    Such q is superadditive, so the set is periodic. With degree >= 2 the
    directions are d >= 0 with d[axis_x] > 0, plus those vanishing on both
    axes; degree 1 gives the closed cone y <= c1·x and degree 0 the
    hyperplane y = 0.
    """

    n: int
    axis_x: int
    axis_y: int
    coeffs: tuple
    kind = "parabola"

    def __post_init__(self):
        if self.coeffs and self.coeffs[0] != 0:
            raise InputError("constant coefficient must be 0")
        if any(c < 0 for c in self.coeffs):
            raise InputError("coefficients must be non-negative")
        if self.axis_x == self.axis_y or not (0 <= self.axis_x < self.n and 0 <= self.axis_y < self.n):
            raise InputError("bad axes")

    @property
    def dim(self):
        return self.n

    @property
    def degree(self) -> int:
        return max((i for i, c in enumerate(self.coeffs) if c), default=0)

    def q(self, t: int) -> int:
        return sum(c * t ** i for i, c in enumerate(self.coeffs))

    def _member(self, x):
        return x[self.axis_y] <= self.q(x[self.axis_x])

    @cached_property
    def directions(self):
        n, ax, ay = self.n, self.axis_x, self.axis_y
        nn = _nonneg_rows(n)
        deg = self.degree
        if deg >= 2:
            out = [_rows_piece(n, gt=[unit(n, ax)], geq=nn)]
            if n > 2:
                out.append(_rows_piece(n, eq=[unit(n, ax), unit(n, ay)], geq=nn))
            return tuple(out)
        if deg == 1:
            row = vsub(vscale(self.coeffs[1], unit(n, ax)), unit(n, ay))
            return (_rows_piece(n, geq=nn + [row]),)
        return (_rows_piece(n, eq=[unit(n, ay)], geq=nn),)

    @cached_property
    def lattice(self):
        if self.degree == 0:
            return Lattice.from_generators(self.n, [unit(self.n, i) for i in range(self.n) if i != self.axis_y])
        return Lattice.full(self.n)

    def line_witness(self, d):
        if self.degree >= 2:
            # (d_y + k·d_x)^2 >= k·d_y once d_x >= 1
            return vscale(d[self.axis_y], unit(self.n, self.axis_x)), 1
        return zero(self.n), 1

    def pump_base_fn(self, fs):
        if self.degree >= 2:
            m = max((f[self.axis_y] for f in fs), default=0)
            return vscale(m, unit(self.n, self.axis_x))
        return zero(self.n)

    def _line_threshold(self, c, g):
        h = _poly_linear(self.coeffs, c[self.axis_x], g[self.axis_x])
        h[0] -= c[self.axis_y]
        if len(h) < 2:
            h.append(0)
        h[1] -= g[self.axis_y]
        return _poly_threshold(h)

    def to_json(self):
        return {"type": "smooth", "kind": "parabola", "dim": self.n, "axis_x": self.axis_x,
                "axis_y": self.axis_y, "coeffs": list(self.coeffs)}


@dataclass(frozen=True)
class LogModel(SmoothModel):
    """{0} ∪ {x : x[axis_y] >= ⌈log2(x[axis_x]+1)⌉ + c}.

    ⌈log2(v+1)⌉ is the bit length of v, and bit lengths are subadditive
    enough (bl(a+b) <= bl(a)+bl(b) for a, b >= 1) for periodicity.
    """

    n: int
    axis_x: int
    axis_y: int
    c: int
    kind = "log"

    def __post_init__(self):
        if self.c < 0:
            raise InputError("offset must be non-negative")
        if self.axis_x == self.axis_y or not (0 <= self.axis_x < self.n and 0 <= self.axis_y < self.n):
            raise InputError("bad axes")

    @property
    def dim(self):
        return self.n

    def _member(self, x):
        return not any(x) or x[self.axis_y] >= _bl(x[self.axis_x]) + self.c

    @cached_property
    def directions(self):
        n = self.n
        nn = _nonneg_rows(n)
        out = [_rows_piece(n, gt=[unit(n, self.axis_y)], geq=nn)]
        if n > 2:
            out.append(_rows_piece(n, eq=[unit(n, self.axis_x), unit(n, self.axis_y)], geq=nn))
        return tuple(out)

    def line_witness(self, d):
        # bl(k·d_x) <= k + bl(d_x) <= k·d_y + bl(d_x)
        return vscale(_bl(d[self.axis_x]) + self.c, unit(self.n, self.axis_y)), 1

    def pump_base_fn(self, fs):
        m = max((f[self.axis_x] for f in fs), default=0)
        return vscale(_bl(m) + self.c, unit(self.n, self.axis_y))

    def _line_threshold(self, c, g):
        ax, ay = self.axis_x, self.axis_y

        def h_ok(k):
            return c[ay] + k * g[ay] >= _bl(c[ax] + k * g[ax]) + self.c

        if g[ay] >= 1:
            return _first_true(h_ok, 1)
        if g[ax] >= 1:
            t = c[ay] - self.c
            if t < 0:
                return 1
            # h fails once c_x + k·g_x >= 2^t
            need = (1 << t) - c[ax]
            return max(1, -(-need // g[ax]))
        return 1

    def to_json(self):
        return {"type": "smooth", "kind": "log", "dim": self.n, "axis_x": self.axis_x,
                "axis_y": self.axis_y, "offset": self.c}


@dataclass(frozen=True)
class ExpModel(SmoothModel):
    """{x : x[a] <= 2^x[b] + offset for each pair (a, b)}, offset in {-1, 0}.

    With offset -1 the set is periodic. With offset 0 it is pure, and its
    period model is the offset -1 variant. A direction d >= 0 must satisfy
    d[a] > 0 ⇒ d[b] > 0 for every pair, so the pieces are indexed by supports
    closed under that implication.
    """

    n: int
    pairs: tuple
    offset: int = -1
    kind = "exp"

    def __post_init__(self):
        if self.offset not in (-1, 0):
            raise InputError("offset must be -1 or 0")
        for a, b in self.pairs:
            if a == b or not (0 <= a < self.n and 0 <= b < self.n):
                raise InputError("bad pair")

    @property
    def periodic(self):
        return self.offset == -1

    @property
    def dim(self):
        return self.n

    def _member(self, x):
        return all(_le_pow2(x[a], x[b], self.offset) for a, b in self.pairs)

    @cached_property
    def directions(self):
        n = self.n
        out = []
        for mask in range(1, 1 << n):
            s = {i for i in range(n) if mask >> i & 1}
            if all(b in s for a, b in self.pairs if a in s):
                out.append(_rows_piece(n, eq=[unit(n, i) for i in range(n) if i not in s],
                                       gt=[unit(n, i) for i in sorted(s)]))
        return tuple(out)

    def line_witness(self, d):
        # D + k·D <= (D+1)(k+1) - 1 <= 2^(D+k) - 1
        dm = max(d, default=0)
        return (dm,) * self.n, 1

    def pump_base_fn(self, fs):
        m = max((max(f) for f in fs), default=0)
        return (m,) * self.n

    def _line_threshold(self, c, g):
        t = 1
        for a, b in self.pairs:
            def ok(k, a=a, b=b):
                return _le_pow2(c[a] + k * g[a], c[b] + k * g[b], self.offset)
            if g[b] >= 1:
                t = max(t, _first_true(ok, max(1, _bl(g[a]))))
            elif g[a] >= 1:
                lim = (1 << c[b]) + self.offset - c[a]
                t = max(t, 0 if lim < 0 else lim // g[a] + 1)
        return t

    def period_model(self):
        return self if self.offset == -1 else ExpModel(self.n, self.pairs, -1)

    def to_json(self):
        return {"type": "smooth", "kind": "exp", "dim": self.n,
                "pairs": [list(p) for p in self.pairs], "offset": self.offset}


@dataclass(frozen=True)
class ProductModel(SmoothModel):
    """{x : x[az] <= x[ax]·x[ay]}."""

    n: int
    ax: int
    ay: int
    az: int
    kind = "product"

    @property
    def dim(self):
        return self.n

    def _member(self, x):
        return x[self.az] <= x[self.ax] * x[self.ay]

    @cached_property
    def directions(self):
        n = self.n
        nn = _nonneg_rows(n)
        out = [_rows_piece(n, gt=[vadd(unit(n, self.ax), unit(n, self.ay))], geq=nn)]
        if n > 3:
            out.append(_rows_piece(n, eq=[unit(n, self.ax), unit(n, self.ay), unit(n, self.az)], geq=nn))
        return tuple(out)

    def line_witness(self, d):
        if d[self.ax] > 0:
            return vscale(d[self.az], unit(self.n, self.ay)), 1
        if d[self.ay] > 0:
            return vscale(d[self.az], unit(self.n, self.ax)), 1
        return zero(self.n), 1

    def pump_base_fn(self, fs):
        # X, Y >= M and X + Y >= 2M + s give X·Y >= M·(M + s) >= Z
        m = max((f[self.az] for f in fs), default=0)
        return vadd(vscale(m, unit(self.n, self.ax)), vscale(m, unit(self.n, self.ay)))

    def _line_threshold(self, c, g):
        x, y, z = self.ax, self.ay, self.az
        h = [c[x] * c[y] - c[z], c[x] * g[y] + c[y] * g[x] - g[z], g[x] * g[y]]
        return _poly_threshold(h)

    def to_json(self):
        return {"type": "smooth", "kind": "product", "dim": self.n, "axes": [self.ax, self.ay, self.az]}


@dataclass(frozen=True)
class OpenOrthantModel(SmoothModel):
    """{0} ∪ {x : x[k] >= 1 for k in coords}."""

    n: int
    coords: tuple
    kind = "open_orthant"

    @property
    def dim(self):
        return self.n

    def _member(self, x):
        return not any(x) or all(x[k] >= 1 for k in self.coords)

    @cached_property
    def directions(self):
        return (_rows_piece(self.n, geq=_nonneg_rows(self.n)),)

    def _ones(self):
        return tuple(1 if i in self.coords else 0 for i in range(self.n))

    def line_witness(self, d):
        return self._ones(), 1

    def pump_base_fn(self, fs):
        return self._ones()

    def _line_threshold(self, c, g):
        return 1

    def to_json(self):
        return {"type": "smooth", "kind": "open_orthant", "dim": self.n, "coords": list(self.coords)}


# --- combinations ----------------------------------------------------------------

def _interior_lattice_point(q: FullPeriodic) -> tuple:
    w = q.cone.interior_point()
    return vscale(q.lattice.multiple_in(w), w) if any(w) else w


def _monoid_step(ks: EventualSet) -> Optional[tuple]:
    """(A, g) with A, A+g ∈ K and g the gcd of K, for K a submonoid of N."""
    bound = ks.threshold + 2 * ks.period + 1
    elems = [k for k in ks.elements_below(bound) if k > 0]
    if not elems:
        return None
    g = reduce(gcd, elems)
    cap = max(bound, max(elems) ** 2 + 2 * ks.period + 2)
    a = g
    while a <= cap:
        if ks.member(a) and ks.member(a + g):
            return a, g
        a += g
    return None


def _scan_line(model: SmoothModel, u: tuple, cap: int = 4000) -> EventualSet:
    try:
        return model.line_set(zero(model.dim), u)
    except NotImplementedError:
        fin = frozenset(k for k in range(cap) if model.member(vscale(k, u)))
        return EventualSet(cap, 1, fin, frozenset())


@dataclass(frozen=True)
class IntersectionModel(SmoothModel):
    """m1 ∩ m2 for models whose fills share their dimension."""

    m1: SmoothModel
    m2: SmoothModel
    kind = "intersection"

    @property
    def dim(self):
        return self.m1.dim

    @property
    def periodic(self):
        return self.m1.periodic and self.m2.periodic

    def _member(self, x):
        return self.m1._member(x) and self.m2._member(x)

    @cached_property
    def directions(self):
        out = []
        for a in self.m1.directions:
            for b in self.m2.directions:
                p = DefinableCone.make(self.dim, a.eq + b.eq, a.gt + b.gt, a.geq + b.geq)
                if not p.is_trivial:
                    out.append(p)
        return tuple(out)

    @cached_property
    def lattice(self):
        return self.m1.lattice.intersect(self.m2.lattice)

    @cached_property
    def _differences(self) -> list:
        """Pairs (q, q') in self with q − q' spanning a full-rank sublattice."""
        fl = self.fill
        if fl.dim == 0:
            return []
        w = _interior_lattice_point(fl)
        us = [w]
        for b in fl.lattice.basis:
            k = 1
            while not fl.interior_member(vadd(b, vscale(k, w))):
                k += 1
            us.append(vadd(b, vscale(k, w)))
        out = []
        for u in us:
            step = _monoid_step(_scan_line(self, u))
            if step is None:
                raise PreconditionViolated(f"no pair of points of the intersection along {u}")
            a, g = step
            out.append((vscale(a + g, u), vscale(a, u)))
        return out

    def _lift(self, x: tuple, inner: SmoothModel) -> tuple:
        """p ∈ inner with x + p ∈ self, given x ∈ inner (which must be periodic)."""
        if not any(x):
            return zero(self.dim)
        diffs = self._differences
        lat = Lattice.from_generators(self.dim, [vsub(q, q2) for q, q2 in diffs])
        lam = lat.multiple_in(x)
        z = int_solve(transpose([vsub(q, q2) for q, q2 in diffs]), vscale(lam, x))
        if z is None:
            raise PreconditionViolated(f"{x} outside the group of the intersection")
        pos, neg = zero(self.dim), zero(self.dim)
        for zi, (q, q2) in zip(z, diffs):
            if zi > 0:
                pos, neg = vadd(pos, vscale(zi, q)), vadd(neg, vscale(zi, q2))
            elif zi < 0:
                pos, neg = vadd(pos, vscale(-zi, q2)), vadd(neg, vscale(-zi, q))
        # λ·x = pos − neg, so x + ((λ−1)·x + neg) = pos
        return vadd(vscale(lam - 1, x), neg)

    def _merge(self, x1: tuple, x2: tuple) -> tuple:
        p1 = self._lift(x1, self.m1.period_model())
        p2 = self._lift(x2, self.m2.period_model())
        return vadd(vadd(x1, p1), vadd(x2, p2))

    def line_witness(self, d):
        x1, k1 = self.m1.line_witness(d)
        x2, k2 = self.m2.line_witness(d)
        return self._merge(x1, x2), lcm(k1, k2)

    def pump_base_fn(self, fs):
        return self._merge(self.m1.pump_base_fn(fs), self.m2.pump_base_fn(fs))

    def line_set(self, c, g):
        return self.m1.line_set(c, g).intersect(self.m2.line_set(c, g))

    def period_model(self):
        if self.periodic:
            return self
        return IntersectionModel(self.m1.period_model(), self.m2.period_model())

    def to_json(self):
        return {"type": "smooth", "kind": "intersection", "models": [self.m1.to_json(), self.m2.to_json()]}


def _sum_piece(a: DefinableCone, b: DefinableCone) -> Optional[DefinableCone]:
    """Projection of {(d, e) : e ∈ a°, d − e ∈ b°} onto d, via Fourier-Motzkin."""
    n = a.dim
    rows = []

    def add(r_d, r_e, strict):
        rows.append((tuple(r_d) + tuple(r_e), 0, strict))

    z = (0,) * n
    for r in a.eq:
        add(z, r, False)
        add(z, vscale(-1, r), False)
    for r in a.gt:
        add(z, r, True)
    for r in a.geq:
        add(z, r, False)
    # b rows applied to d − e
    for r in b.eq:
        add(r, vscale(-1, r), False)
        add(vscale(-1, r), r, False)
    for r in b.gt:
        add(r, vscale(-1, r), True)
    for r in b.geq:
        add(r, vscale(-1, r), False)
    for k in range(2 * n - 1, n - 1, -1):
        rows = _fm_eliminate(rows, k)
    gt, geq = [], []
    for r, rhs, strict in rows:
        r = r[:n]
        if not any(r):
            if rhs > 0 or (strict and rhs == 0):
                return None
            continue
        (gt if strict else geq).append(r)
    p = DefinableCone.make(n, (), gt, geq)
    return None if p.is_trivial else p


@dataclass(frozen=True)
class SumModel(SmoothModel):
    """m1 + m2, membership by exhaustive search over y <= x."""

    m1: SmoothModel
    m2: SmoothModel
    budget: int = 200_000
    kind = "sum"

    @property
    def dim(self):
        return self.m1.dim

    @property
    def periodic(self):
        return self.m1.periodic and self.m2.periodic

    def _member(self, x):
        count = 0
        for y in itertools.product(*(range(v + 1) for v in x)):
            count += 1
            if count > self.budget:
                raise BudgetExceeded([], count)
            if self.m1._member(y) and self.m2._member(vsub(x, y)):
                return True
        return False

    @cached_property
    def directions(self):
        out = list(self.m1.directions) + list(self.m2.directions)
        for a in self.m1.directions:
            for b in self.m2.directions:
                p = _sum_piece(a, b)
                if p is not None:
                    out.append(p)
        return tuple(out)

    @cached_property
    def lattice(self):
        return self.m1.lattice.sum(self.m2.lattice)

    def _split(self, d):
        for e in itertools.product(*(range(v + 1) for v in d)):
            r = vsub(d, e)
            if (self.m1.in_directions(e) and self.m1.lattice.member(e)
                    and self.m2.in_directions(r) and self.m2.lattice.member(r)):
                return e, r
        raise PreconditionViolated(f"{tuple(d)} has no integral split into summand directions")

    def line_witness(self, d):
        e, r = self._split(d)
        x1, k1 = self.m1.line_witness(e)
        x2, k2 = self.m2.line_witness(r)
        # both lines advance with the common step lcm(k1, k2)
        return vadd(x1, x2), lcm(k1, k2)

    def pump_base_fn(self, fs):
        parts = [self._split(f) for f in fs]
        x1 = self.m1.pump_base_fn([e for e, _ in parts if any(e)])
        x2 = self.m2.pump_base_fn([r for _, r in parts if any(r)])
        return vadd(x1, x2)

    def to_json(self):
        return {"type": "smooth", "kind": "sum", "models": [self.m1.to_json(), self.m2.to_json()]}


@dataclass(frozen=True)
class CutModel(SmoothModel):
    """{q ∈ region : shift + q ∈ inner}: what b + inner looks like inside f + region.

    ``region`` is a full periodic set contained in Fill(inner) with the same
    dimension. The set is pure; its period model is inner ∩ region.
    """

    inner: SmoothModel
    shift: tuple
    region: FullPeriodic
    kind = "cut"
    periodic = False

    @property
    def dim(self):
        return self.inner.dim

    def _member(self, x):
        return self.region.member(x) and self.inner.member(vadd(self.shift, x))

    @cached_property
    def _region_model(self) -> GeneratorModel:
        return GeneratorModel.of(self.dim, self.region.generators)

    @cached_property
    def _periodic_inner(self) -> SmoothModel:
        return IntersectionModel(self.inner.period_model(), self._region_model)

    @cached_property
    def directions(self):
        rc = DefinableCone.from_cone(self.region.cone)
        out = []
        for a in self.inner.directions:
            p = DefinableCone.make(self.dim, a.eq + rc.eq, a.gt, a.geq + rc.geq)
            if not p.is_trivial:
                out.append(p)
        return tuple(out)

    @property
    def lattice(self):
        return self.region.lattice

    @cached_property
    def fill(self):
        return self.region

    @cached_property
    def anchor(self) -> tuple:
        """y0 ∈ Y with y0 + (inner ∩ region) ⊆ Y."""
        s = self.shift
        inner = self.inner
        w = _interior_lattice_point(self.region)
        if not any(w):
            if not inner.member(s):
                raise PreconditionViolated("shift is not in the inner set")
            return zero(self.dim)
        k = 1
        while not (inner.in_directions(vadd(s, vscale(k, w))) and inner.in_directions(vscale(k, w))):
            k += 1
            if k > 10_000:
                raise PreconditionViolated("shift does not enter the direction cone")
        nw = vscale(k, w)
        x0 = inner.pump_base_fn([nw, vadd(s, nw)])
        # adding (λ−1)·x0 from the period moves x0 into the region lattice
        if not inner.period_model().member(x0):
            raise PreconditionViolated("pump base of the inner set is not in its period")
        lam = self.region.lattice.multiple_in(x0) if any(x0) else 1
        y = vadd(vscale(lam, x0), nw)
        while not self.region.cone.member(y):
            y = vadd(y, nw)
        return y

    def line_witness(self, d):
        x, m = self._periodic_inner.line_witness(d)
        return vadd(self.anchor, x), m

    def pump_base_fn(self, fs):
        return vadd(self.anchor, self._periodic_inner.pump_base_fn(fs))

    def line_set(self, c, g):
        return _full_line_set(self.region, c, g).intersect(self.inner.line_set(vadd(self.shift, c), g))

    def period_model(self):
        return self._periodic_inner

    def to_json(self):
        return {"type": "smooth", "kind": "cut", "model": self.inner.to_json(),
                "shift": list(self.shift), "region": self.region.to_json()}


# --- operations ------------------------------------------------------------------

def fill_of(model: SmoothModel) -> FullPeriodic:
    return model.fill


def check_pump_precondition(model: SmoothModel, fs: Iterable[Sequence]) -> list:
    out = []
    for f in fs:
        f = ivec(f)
        if len(f) != model.dim:
            raise PreconditionViolated(f"{f} has the wrong dimension")
        if not model.lattice.member(f):
            raise PreconditionViolated(f"{f} is not in the lattice of the model")
        if not model.in_directions(f):
            raise PreconditionViolated(f"{f} is not a direction of the model")
        if any(f) and f not in out:
            out.append(f)
    return out


def pump_base(model: SmoothModel, fs: Iterable[Sequence] = ()) -> tuple:
    """x with x + F* ⊆ model."""
    fs = check_pump_precondition(model, fs)
    if not fs and model.member(zero(model.dim)):
        return zero(model.dim)
    return ivec(model.pump_base_fn(fs))


def line_witness(model: SmoothModel, d: Sequence) -> tuple:
    d = ivec(d)
    if not model.in_directions(d):
        raise PreconditionViolated(f"{d} is not a direction of the model")
    x, m = model.line_witness(d)
    return ivec(x), m


def verify_pump(model: SmoothModel, x: Sequence, fs: Sequence, depth: int = 6) -> bool:
    """x + Σ a_i f_i ∈ model for every Σ a_i <= depth."""
    fs = [ivec(f) for f in fs]
    for k in range(depth + 1):
        for combo in itertools.combinations_with_replacement(range(len(fs)), k):
            y = tuple(x)
            for i in combo:
                y = vadd(y, fs[i])
            if not model.member(y):
                return False
        if not fs:
            break
    return True


def verify_line(model: SmoothModel, x: Sequence, m: int, d: Sequence, count: int = 50) -> bool:
    return all(model.member(vadd(x, vscale(k * m, d))) for k in range(count))


def intersect_models(m1: SmoothModel, m2: SmoothModel) -> SmoothModel:
    if m1.dim != m2.dim:
        raise DimensionMismatch("models live in different dimensions")
    f1, f2 = m1.fill, m2.fill
    both = intersect_full(f1, f2)
    if not (both.dim == f1.dim == f2.dim):
        raise DimensionMismatch(f"fills of dimensions {f1.dim} and {f2.dim} meet in dimension {both.dim}")
    if m1 == m2:
        return m1
    return IntersectionModel(m1, m2)


def sum_models(m1: SmoothModel, m2: SmoothModel) -> SmoothModel:
    if m1.dim != m2.dim:
        raise DimensionMismatch("models live in different dimensions")
    return SumModel(m1, m2)


def member(obj, x: Sequence) -> bool:
    return obj.member(x)


@dataclass(frozen=True)
class AlmostHybridRep:
    """⋃ b_i + P_i with all fills equal."""

    parts: tuple

    @staticmethod
    def make(parts: Iterable[tuple]) -> "AlmostHybridRep":
        parts = tuple((ivec(b), m) for b, m in parts)
        if not parts:
            raise InputError("a representation needs at least one part")
        n = parts[0][1].dim
        f0 = parts[0][1].fill
        for b, m in parts:
            if m.dim != n or len(b) != n:
                raise DimensionMismatch("parts live in different dimensions")
            if not m.fill.same_set(f0):
                raise InputError("parts have different fills")
        return AlmostHybridRep(parts)

    @property
    def dim(self) -> int:
        return self.parts[0][1].dim

    @property
    def fill(self) -> FullPeriodic:
        return self.parts[0][1].fill

    def member(self, x: Sequence) -> bool:
        return any(all(v >= 0 for v in vsub(x, b)) and m.member(vsub(x, b)) for b, m in self.parts)

    def __contains__(self, x) -> bool:
        return self.member(x)

    def to_json(self) -> dict:
        return {"type": "rep", "parts": [{"base": list(b), "model": m.to_json()} for b, m in self.parts]}


@dataclass(frozen=True)
class WeakHybridization:
    bases: tuple
    fill: FullPeriodic
    witness_period: SmoothModel

    def member(self, x: Sequence) -> bool:
        return any(self.fill.member(vsub(x, b)) for b in self.bases)


def weak_hybridization(rep: AlmostHybridRep) -> WeakHybridization:
    bases = tuple(sorted({b for b, _ in rep.parts}))
    models = []
    for _, m in rep.parts:
        p = m.period_model()
        if p not in models:
            models.append(p)
    per = models[0]
    for m in models[1:]:
        per = intersect_models(per, m)
    return WeakHybridization(bases, rep.fill, per)


# --- JSON --------------------------------------------------------------------------

def model_from_json(d: dict, path: str = "$") -> SmoothModel:
    from .jsonio import check_keys, expect, field, gen_periodic_from_json, int_vec, nat, periodic_from_json

    kind = field(d, "kind", path)
    if field(d, "type", path) != "smooth":
        raise InputError("expected a smooth model", f"{path}.type")

    def axis(key, n):
        v = nat(field(d, key, path), f"{path}.{key}")
        if v >= n:
            raise InputError("axis out of range", f"{path}.{key}")
        return v

    try:
        if kind == "generators":
            check_keys(d, {"type", "kind", "dim", "generators"}, path)
            gp = gen_periodic_from_json({"type": "gen_periodic", "dim": d.get("dim"),
                                         "generators": field(d, "generators", path)}, path)
            return GeneratorModel(gp)
        if kind in ("parabola", "log"):
            extra = "coeffs" if kind == "parabola" else "offset"
            check_keys(d, {"type", "kind", "dim", "axis_x", "axis_y", extra}, path)
            n = nat(field(d, "dim", path), f"{path}.dim")
            ax, ay = axis("axis_x", n), axis("axis_y", n)
            if kind == "parabola":
                return ParabolaModel(n, ax, ay, int_vec(field(d, "coeffs", path), f"{path}.coeffs"))
            return LogModel(n, ax, ay, nat(field(d, "offset", path), f"{path}.offset"))
        if kind == "exp":
            check_keys(d, {"type", "kind", "dim", "pairs", "offset"}, path)
            n = nat(field(d, "dim", path), f"{path}.dim")
            pairs = expect(field(d, "pairs", path), list, f"{path}.pairs")
            ps = tuple(int_vec(p, f"{path}.pairs[{i}]", 2) for i, p in enumerate(pairs))
            return ExpModel(n, ps, field(d, "offset", path, -1))
        if kind == "product":
            check_keys(d, {"type", "kind", "dim", "axes"}, path)
            n = nat(field(d, "dim", path), f"{path}.dim")
            a = int_vec(field(d, "axes", path), f"{path}.axes", 3)
            if len(set(a)) != 3 or not all(0 <= v < n for v in a):
                raise InputError("bad axes", f"{path}.axes")
            return ProductModel(n, *a)
        if kind == "open_orthant":
            check_keys(d, {"type", "kind", "dim", "coords"}, path)
            n = nat(field(d, "dim", path), f"{path}.dim")
            cs = int_vec(field(d, "coords", path), f"{path}.coords")
            if not all(0 <= v < n for v in cs):
                raise InputError("coordinate out of range", f"{path}.coords")
            return OpenOrthantModel(n, cs)
        if kind in ("intersection", "sum"):
            check_keys(d, {"type", "kind", "models"}, path)
            ms = expect(field(d, "models", path), list, f"{path}.models")
            if len(ms) < 1:
                raise InputError("need at least one model", f"{path}.models")
            parsed = [model_from_json(m, f"{path}.models[{i}]") for i, m in enumerate(ms)]
            op = intersect_models if kind == "intersection" else sum_models
            out = parsed[0]
            for m in parsed[1:]:
                out = op(out, m)
            return out
        if kind == "cut":
            check_keys(d, {"type", "kind", "model", "shift", "region"}, path)
            inner = model_from_json(field(d, "model", path), f"{path}.model")
            region = periodic_from_json(field(d, "region", path), f"{path}.region")
            shift = int_vec(field(d, "shift", path), f"{path}.shift", inner.dim)
            return CutModel(inner, shift, region)
    except InputError as e:
        if e.path == "$":
            raise InputError(str(e).split(": ", 1)[-1], path) from None
        raise
    raise InputError(f"unknown model kind '{kind}'", f"{path}.kind")


def rep_from_json(d: dict, path: str = "$") -> AlmostHybridRep:
    from .jsonio import check_keys, expect, field, int_vec

    check_keys(d, {"type", "parts"}, path)
    if field(d, "type", path) != "rep":
        raise InputError("expected a representation", f"{path}.type")
    parts = []
    for i, p in enumerate(expect(field(d, "parts", path), list, f"{path}.parts")):
        pp = f"{path}.parts[{i}]"
        check_keys(p, {"base", "model"}, pp)
        m = model_from_json(field(p, "model", pp), f"{pp}.model")
        parts.append((int_vec(field(p, "base", pp), f"{pp}.base", m.dim), m))
    if not parts:
        raise InputError("a representation needs at least one part", f"{path}.parts")
    try:
        return AlmostHybridRep.make(parts)
    except DimensionMismatch as e:
        raise InputError(str(e), f"{path}.parts") from None
