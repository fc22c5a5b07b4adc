"""Small vector addition systems and a catalog of worked examples.

Reachability is explored inside a box [0, B]^n only: a configuration counts
when some path from the initial configuration reaches it without any
intermediate configuration leaving the box. This under-approximates
reach ∩ box; ``saturated`` reports whether the box was closed under every
transition, in which case the two coincide.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .errors import BudgetExceeded, InputError
from .smooth import ExpModel, GeneratorModel, LogModel, ParabolaModel, ProductModel

DEFAULT_BUDGET = 1_000_000


@dataclass(frozen=True)
class Vas:
    dim: int
    initial: tuple
    transitions: tuple

    @staticmethod
    def make(dim: int, initial: Sequence[int], transitions: Sequence[Sequence[int]]) -> "Vas":
        init = tuple(int(v) for v in initial)
        ts = tuple(tuple(int(v) for v in t) for t in transitions)
        if len(init) != dim or any(len(t) != dim for t in ts):
            raise InputError("vector length differs from the dimension")
        if any(v < 0 for v in init):
            raise InputError("initial configuration must be non-negative", "$.initial")
        return Vas(dim, init, ts)

    def successors(self, x: tuple):
        for t in self.transitions:
            y = tuple(a + b for a, b in zip(x, t))
            if min(y, default=0) >= 0:
                yield y

    def to_json(self) -> dict:
        return {"type": "vas", "dim": self.dim, "initial": list(self.initial),
                "transitions": [list(t) for t in self.transitions]}


def vas_from_json(d: dict, path: str = "$") -> Vas:
    from .jsonio import check_keys, expect, field, int_rows, int_vec, nat

    check_keys(d, {"type", "dim", "initial", "transitions"}, path)
    if field(d, "type", path) != "vas":
        raise InputError("expected a vas", f"{path}.type")
    n = nat(field(d, "dim", path), f"{path}.dim")
    init = int_vec(field(d, "initial", path), f"{path}.initial", n)
    for i, v in enumerate(init):
        if v < 0:
            raise InputError("expected non-negative integer", f"{path}.initial[{i}]")
    ts = int_rows(expect(field(d, "transitions", path), list, f"{path}.transitions"), f"{path}.transitions", n)
    return Vas(n, init, tuple(ts))


@dataclass(frozen=True)
class BoundedReachSet:
    bound: int
    points: tuple  # sorted
    saturated: bool

    def member(self, x: Sequence[int]) -> bool:
        return tuple(x) in self._set

    @property
    def _set(self) -> frozenset:
        s = self.__dict__.get("_cache")
        if s is None:
            s = frozenset(self.points)
            object.__setattr__(self, "_cache", s)
        return s

    def to_json(self) -> dict:
        return {"bound": self.bound, "saturated": self.saturated, "count": len(self.points),
                "points": [list(p) for p in self.points]}


def bounded_reach(v: Vas, bound: int, budget: int = DEFAULT_BUDGET) -> BoundedReachSet:
    """Breadth-first search inside [0, bound]^n; the budget counts dequeued states."""
    if bound < max(v.initial, default=0):
        raise InputError(f"box bound {bound} is below the initial configuration")
    seen = {v.initial}
    queue = deque([v.initial])
    saturated = True
    used = 0
    while queue:
        used += 1
        if used > budget:
            raise BudgetExceeded(sorted(seen), used)
        x = queue.popleft()
        for y in v.successors(x):
            if max(y, default=0) > bound:
                saturated = False
                continue
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return BoundedReachSet(bound, tuple(sorted(seen)), saturated)


def member_bounded(v: Vas, x: Sequence[int], bound: int) -> bool:
    """Membership in the box-path reachability set (an under-approximation)."""
    if any(c < 0 or c > bound for c in x):
        raise InputError("point lies outside the box")
    return bounded_reach(v, bound).member(x)


# --- catalog ------------------------------------------------------------------------

@dataclass(frozen=True)
class CatalogEntry:
    name: str
    dim: int
    vas: Optional[Vas]
    parts: Optional[tuple]  # (base, model) pairs describing X, when known
    closed_form: Optional[Callable]
    note: str = ""

    def provider(self):
        from .decompose import AnnotatedProvider
        if self.parts is None:
            return None
        return AnnotatedProvider(self.parts, self.name)


def doubling_vas() -> Vas:
    """Counters (x, y, z) with a two-state control encoded in places (p, p', q, q').

    State p moves z into y one token at a time, state q turns every y into
    two z; switching q → p increments x. So y + z <= 2^x holds in state p
    and 2y + z <= 2^(x+1) in state q.
    """
    #            x   y   z   p  p'  q  q'
    return Vas.make(7, (0, 0, 1, 1, 0, 0, 0), [
        (0, 0, -1, -1, 1, 0, 0),
        (0, 1, 0, 1, -1, 0, 0),
        (0, 0, 0, -1, 0, 1, 0),
        (0, -1, 0, 0, 0, -1, 1),
        (0, 0, 2, 0, 0, 1, -1),
        (1, 0, 0, 1, 0, -1, 0),
    ])


def catalog() -> list:
    z2, z3 = (0, 0), (0, 0, 0)
    return [
        CatalogEntry("diagonal", 2, Vas.make(2, z2, [(1, 1)]),
                     ((z2, GeneratorModel.of(2, [(1, 1)])),), lambda x: x[0] == x[1]),
        CatalogEntry("orthant", 2, Vas.make(2, z2, [(1, 0), (0, 1)]),
                     ((z2, GeneratorModel.of(2, [(1, 0), (0, 1)])),), lambda x: True),
        CatalogEntry("parabola", 2, None, ((z2, ParabolaModel(2, 0, 1, (0, 0, 1))),),
                     lambda x: x[1] <= x[0] * x[0], "below the convex curve y = x^2"),
        CatalogEntry("above-log", 2, None, ((z2, LogModel(2, 0, 1, 3)),),
                     lambda x: x == (0, 0) or x[1] >= x[0].bit_length() + 3),
        CatalogEntry("doubling", 7, doubling_vas(), None, None,
                     "weak doubling: y + z <= 2^x in the transfer state"),
        CatalogEntry("appendixG", 3, None,
                     ((z3, ProductModel(3, 0, 1, 2)), (z3, ExpModel(3, ((1, 0), (0, 1), (0, 2)), 0))),
                     lambda x: x[2] <= x[0] * x[1] or (x[1] <= 2 ** x[0] and x[0] <= 2 ** x[1]
                                                       and x[0] <= 2 ** x[2]),
                     "union of z <= xy and an exponential region"),
    ]


def catalog_entry(name: str) -> CatalogEntry:
    for e in catalog():
        if e.name == name:
            return e
    raise InputError(f"unknown catalog entry '{name}'")
