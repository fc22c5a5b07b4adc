"""Rational polyhedral cones in generator and half-space form.

Conversions use the double description method with an algebraic (rank)
adjacency test. Every ConeH is kept irredundant: implicit equalities are
moved into ``eq`` and redundant inequalities are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Optional, Sequence

from .exactla import (
    dot,
    ivec,
    kernel,
    lp_witness,
    primitive,
    rank,
    rref,
    unit,
    vadd,
    vscale,
    vsub,
)


def _prim_rows(rows) -> tuple:
    out = []
    for r in rows:
        p = primitive(r)
        if any(p) and p not in out:
            out.append(p)
    return tuple(out)


def _iprim(v) -> tuple:
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def double_description(n: int, ineqs: Sequence[Sequence]) -> tuple[list, list]:
    """Generators of {x in Q^n : a·x >= 0 for every a in ineqs}.

    Returns (lineality basis, extreme rays of the pointed part), all primitive
    integer vectors. Works in integers throughout.
    """
    lin: list = [unit(n, i) for i in range(n)]
    rays: list = []
    done: list = []
    for a in ineqs:
        a = ivec(primitive(a)) if any(a) else None
        if a is None:
            continue
        l0 = next((l for l in lin if dot(a, l) != 0), None)
        if l0 is not None:
            if dot(a, l0) < 0:
                l0 = tuple(-x for x in l0)
            al0 = dot(a, l0)
            new_lin = []
            for l in lin:
                if l == l0 or l == tuple(-x for x in l0):
                    continue
                nl = _iprim(vsub(vscale(al0, l), vscale(dot(a, l), l0)))
                if any(nl):
                    new_lin.append(nl)
            keep: list = []
            for l in new_lin:
                if rank(keep + [l]) > len(keep):
                    keep.append(l)
            rays = [_iprim(vsub(vscale(al0, r), vscale(dot(a, r), l0))) for r in rays]
            rays.append(_iprim(l0))
            lin = keep
            done.append(a)
            continue
        done.append(a)
        vals = [dot(a, r) for r in rays]
        pos = [r for r, v in zip(rays, vals) if v > 0]
        neg = [r for r, v in zip(rays, vals) if v < 0]
        new = [r for r, v in zip(rays, vals) if v >= 0]
        target = n - len(lin) - 2
        prev = done[:-1]
        zsets = {r: frozenset(i for i, c in enumerate(prev) if dot(c, r) == 0) for r in pos + neg}
        for rp in pos:
            for rn in neg:
                common = zsets[rp] & zsets[rn]
                if target < 0 or len(common) < target:
                    continue
                if common and rank([prev[i] for i in common]) != target:
                    continue
                ap, an = dot(a, rp), dot(a, rn)
                new.append(_iprim(vsub(vscale(ap, rn), vscale(an, rp))))
        seen = set()
        rays = []
        for r in new:
            if any(r) and r not in seen:
                seen.add(r)
                rays.append(r)
    return [_iprim(l) for l in lin], rays


def _reduce_against(rows_eq: list, v: Sequence) -> tuple:
    """Canonical representative of v modulo the row space of rows_eq."""
    red, piv = rref(rows_eq) if rows_eq else ([], [])
    w = [Fraction(x) for x in v]
    for row, p in zip(red, piv):
        if w[p]:
            f = w[p]
            w = [x - f * y for x, y in zip(w, row)]
    return primitive(w)


@dataclass(frozen=True)
class ConeH:
    """{x : eq·x = 0, geq·x >= 0}, irredundant once built with ``make``."""

    dim: int
    eq: tuple = ()
    geq: tuple = ()

    @staticmethod
    def make(dim: int, eq: Sequence = (), geq: Sequence = ()) -> "ConeH":
        return _normalize(dim, [ivec(r) for r in eq], [ivec(r) for r in geq])

    @staticmethod
    def zero(dim: int) -> "ConeH":
        return ConeH(dim, tuple(unit(dim, i) for i in range(dim)), ())

    @staticmethod
    def orthant(dim: int) -> "ConeH":
        return ConeH(dim, (), tuple(sorted(unit(dim, i) for i in range(dim))))

    @staticmethod
    def space(dim: int) -> "ConeH":
        return ConeH(dim, (), ())

    def member(self, x: Sequence) -> bool:
        return all(dot(r, x) == 0 for r in self.eq) and all(dot(r, x) >= 0 for r in self.geq)

    def interior_member(self, x: Sequence) -> bool:
        """Relative interior: inside the span with every facet inequality strict."""
        return all(dot(r, x) == 0 for r in self.eq) and all(dot(r, x) > 0 for r in self.geq)

    def in_span(self, x: Sequence) -> bool:
        return all(dot(r, x) == 0 for r in self.eq)

    @property
    def cone_dim(self) -> int:
        return self.dim - rank(self.eq) if self.eq else self.dim

    @cached_property
    def vrep(self) -> "ConeV":
        lin, rays = double_description(self.dim, list(self.eq) + [vscale(-1, r) for r in self.eq] + list(self.geq))
        gens = list(rays) + list(lin) + [vscale(-1, l) for l in lin]
        return ConeV(self.dim, _prim_rows(gens))

    @cached_property
    def lineality(self) -> tuple:
        rows = list(self.eq) + list(self.geq)
        return tuple(kernel(rows, self.dim)) if rows else tuple(unit(self.dim, i) for i in range(self.dim))

    @cached_property
    def span_basis(self) -> tuple:
        return tuple(kernel(list(self.eq), self.dim)) if self.eq else tuple(unit(self.dim, i) for i in range(self.dim))

    def facets(self) -> list:
        return [ConeH.make(self.dim, list(self.eq) + [r], [g for g in self.geq if g != r]) for r in self.geq]

    def intersect(self, other: "ConeH") -> "ConeH":
        _check_dim(self.dim, other.dim)
        return ConeH.make(self.dim, list(self.eq) + list(other.eq), list(self.geq) + list(other.geq))

    def contains(self, other: "ConeH") -> bool:
        return all(self.member(g) for g in other.vrep.generators)

    def same(self, other: "ConeH") -> bool:
        return self.dim == other.dim and self.eq == other.eq and set(self.geq) == set(other.geq)

    def interior_point(self) -> tuple:
        """A primitive integer point of the relative interior (sum of generators)."""
        gens = self.vrep.generators
        s = (0,) * self.dim
        for g in gens:
            s = vadd(s, g)
        if any(s) and self.interior_member(s):
            return primitive(s)
        if not self.geq:
            return (0,) * self.dim
        w = lp_witness(self.geq, [], self.eq, self.dim)
        return primitive(w) if w is not None else (0,) * self.dim

    def to_json(self) -> dict:
        return {"type": "cone_h", "dim": self.dim, "eq": [list(r) for r in self.eq], "geq": [list(r) for r in self.geq]}


@dataclass(frozen=True)
class ConeV:
    """Non-negative rational combinations of ``generators``; empty means {0}."""

    dim: int
    generators: tuple = ()

    @staticmethod
    def make(dim: int, generators: Sequence = ()) -> "ConeV":
        gens = [ivec(g) for g in generators]
        for g in gens:
            _check_dim(dim, len(g))
        return ConeV(dim, _prim_rows(gens))

    @cached_property
    def hrep(self) -> ConeH:
        return vrep_to_hrep(self)

    def member(self, x: Sequence) -> bool:
        return self.hrep.member(x)

    @property
    def cone_dim(self) -> int:
        return rank(self.generators) if self.generators else 0

    def to_json(self) -> dict:
        return {"type": "cone_v", "dim": self.dim, "generators": [list(g) for g in self.generators]}


def _check_dim(a: int, b: int) -> None:
    if a != b:
        raise ValueError(f"dimension mismatch: {a} vs {b}")


def vrep_to_hrep(c: ConeV) -> ConeH:
    n = c.dim
    if not c.generators:
        return ConeH.zero(n)
    lin, rays = double_description(n, list(c.generators))
    eq = [list(l) for l in lin]
    red, _ = rref(eq) if eq else ([], [])
    eq_rows = [primitive(r) for r in red]
    geq_rows = sorted({_reduce_against(eq_rows, r) for r in rays})
    return ConeH(n, tuple(eq_rows), tuple(geq_rows))


def hrep_to_vrep(c: ConeH) -> ConeV:
    return c.vrep


def _normalize(n: int, eq: list, geq: list) -> ConeH:
    for r in eq + geq:
        _check_dim(n, len(r))
    lin, rays = double_description(n, eq + [vscale(-1, r) for r in eq] + geq)
    gens = list(rays) + list(lin) + [vscale(-1, l) for l in lin]
    return vrep_to_hrep(ConeV(n, _prim_rows(gens)))


def cone_intersect(a: ConeH, b: ConeH) -> ConeH:
    return a.intersect(b)


def interior_member(c: ConeH, x: Sequence) -> bool:
    return c.interior_member(x)


def facets(c: ConeH) -> list:
    return c.facets()


def cone_dim(c) -> int:
    return c.cone_dim


@dataclass(frozen=True)
class DefinableCone:
    """{0} together with {x : eq·x = 0, gt·x > 0, geq·x >= 0}."""

    dim: int
    eq: tuple = ()
    gt: tuple = ()
    geq: tuple = ()

    @staticmethod
    def make(dim: int, eq: Sequence = (), gt: Sequence = (), geq: Sequence = ()) -> "DefinableCone":
        for r in (*eq, *gt, *geq):
            _check_dim(dim, len(r))
        return DefinableCone(dim, _prim_rows([ivec(r) for r in eq]), _prim_rows([ivec(r) for r in gt]),
                             _prim_rows([ivec(r) for r in geq]))

    @staticmethod
    def from_cone(c: ConeH) -> "DefinableCone":
        return DefinableCone(c.dim, c.eq, (), c.geq)

    @staticmethod
    def interior_of(c: ConeH) -> "DefinableCone":
        """Relative interior of a closed cone (plus the origin)."""
        return DefinableCone(c.dim, c.eq, c.geq, ())

    @cached_property
    def is_trivial(self) -> bool:
        """True when the cone is exactly {0}."""
        w = lp_witness(self.gt, self.geq, self.eq, self.dim)
        if w is None:
            return True
        if self.gt:
            return False
        return self.closure().cone_dim == 0

    def member(self, x: Sequence) -> bool:
        if not any(x):
            return True
        if self.is_trivial:
            return False
        return (all(dot(r, x) == 0 for r in self.eq) and all(dot(r, x) > 0 for r in self.gt)
                and all(dot(r, x) >= 0 for r in self.geq))

    def closure(self) -> ConeH:
        if lp_witness(self.gt, self.geq, self.eq, self.dim) is None:
            return ConeH.zero(self.dim)
        return ConeH.make(self.dim, self.eq, list(self.gt) + list(self.geq))

    def witness(self) -> Optional[tuple]:
        """A nonzero primitive integer member, or None if the cone is {0}."""
        if self.is_trivial:
            return None
        w = lp_witness(self.gt, self.geq, self.eq, self.dim)
        if w is not None and any(w):
            return primitive(w)
        return self.closure().interior_point()

    def to_json(self) -> dict:
        return {"type": "cone_def", "dim": self.dim, "eq": [list(r) for r in self.eq],
                "gt": [list(r) for r in self.gt], "geq": [list(r) for r in self.geq]}


def definable_closure(c: DefinableCone) -> ConeH:
    return c.closure()
