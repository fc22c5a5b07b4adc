import itertools
from math import lcm
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from vasgeo.cones import ConeH, ConeV, DefinableCone, cone_intersect, definable_closure, vrep_to_hrep


def box(n, r=4):
    return itertools.product(range(-r, r + 1), repeat=n)


def same_members(a, b, n, r=6):
    return all(a.member(x) == b.member(x) for x in box(n, r))


def test_vrep_to_hrep_three_generator_cone():
    h = vrep_to_hrep(ConeV.make(2, [(1, 1), (1, 0)]))
    assert set(h.geq) == {(1, -1), (0, 1)} and h.eq == ()


def test_vrep_empty_is_origin():
    h = ConeV.make(2, []).hrep
    assert h.cone_dim == 0
    assert h.member((0, 0)) and not h.member((1, 0))


def test_redundant_generator_dropped():
    h = ConeV.make(2, [(1, 0), (0, 1), (1, 1)]).hrep
    assert set(h.geq) == {(1, 0), (0, 1)}


def test_hrep_to_vrep_examples():
    assert set(ConeH.make(2, [], [(1, -1), (0, 1)]).vrep.generators) == {(1, 1), (1, 0)}
    space = ConeH.make(2).vrep
    assert same_members(ConeV.make(2, space.generators).hrep, ConeH.space(2), 2)
    ray = ConeH.make(2, [(1, -1)], [(1, 0)])
    assert ray.vrep.generators == ((1, 1),)


def test_intersections():
    c = ConeH.make(2, [], [(1, -1), (0, 1)])
    assert same_members(cone_intersect(c, c), c, 2)
    a = ConeH.make(2, [], [(1, -1), (1, 0), (0, 1)])
    b = ConeH.make(2, [], [(-1, 1), (1, 0), (0, 1)])
    assert a.intersect(b).vrep.generators == ((1, 1),)
    y_axis = ConeH.orthant(2).intersect(ConeH.make(2, [(1, 0)], []))
    assert y_axis.vrep.generators == ((0, 1),)


def test_interior_and_facets():
    c = ConeH.make(2, [], [(1, -1), (0, 1)])
    assert c.interior_member((2, 1))
    assert not c.interior_member((1, 1))
    fs = c.facets()
    gens = sorted(f.vrep.generators for f in fs)
    assert gens == [((1, 0),), ((1, 1),)]
    assert all(f.cone_dim < c.cone_dim for f in fs)


def test_definable_closure_examples():
    assert same_members(definable_closure(DefinableCone.make(1, gt=[(1,)])), ConeH.make(1, [], [(1,)]), 1)
    assert definable_closure(DefinableCone.make(1, gt=[(1,), (-1,)])).cone_dim == 0
    half = definable_closure(DefinableCone.make(2, gt=[(1, 0)]))
    assert same_members(half, ConeH.make(2, [], [(1, 0)]), 2)


def test_cone_dims():
    assert ConeV.make(2, []).cone_dim == 0
    assert ConeV.make(2, [(1, 1)]).cone_dim == 1
    assert ConeV.make(2, [(1, 1), (1, 0)]).cone_dim == 2


def test_definable_origin_only():
    c = DefinableCone.make(2, gt=[(1, 0), (-1, 0)])
    assert c.is_trivial and c.member((0, 0)) and not c.member((1, 0))


gens = st.integers(2, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=0, max_size=4))


@settings(max_examples=40, deadline=None)
@given(gens)
def test_round_trip_membership(gs):
    n = len(gs[0]) if gs else 2
    c = ConeV.make(n, gs)
    back = ConeV.make(n, c.hrep.vrep.generators)
    r = 3 if n == 4 else 5
    assert all(c.hrep.member(x) == back.hrep.member(x) for x in box(n, r))


def _in_cone_brute(gs, x, n):
    # x in cone(gs) iff some non-negative rational combination hits x; small systems via Fraction LP
    from vasgeo.exactla import polyhedron_witness
    k = len(gs)
    if k == 0:
        return not any(x)
    rows = [(tuple(1 if j == i else 0 for j in range(k)), 0, False) for i in range(k)]
    for i in range(n):
        a = tuple(g[i] for g in gs)
        rows.append((a, x[i], False))
        rows.append((tuple(-v for v in a), -x[i], False))
    return polyhedron_witness(rows, k) is not None


@settings(max_examples=25, deadline=None)
@given(st.lists(st.lists(st.integers(-2, 2), min_size=2, max_size=2), max_size=3))
def test_hrep_matches_combination_oracle(gs):
    c = ConeV.make(2, gs)
    for x in box(2, 3):
        assert c.member(x) == _in_cone_brute([tuple(g) for g in gs], x, 2)


rows = st.lists(st.lists(st.integers(-2, 2), min_size=2, max_size=2), max_size=3)


@settings(max_examples=40, deadline=None)
@given(rows, rows)
def test_intersection_is_conjunction(r1, r2):
    a, b = ConeH.make(2, [], r1), ConeH.make(2, [], r2)
    both = a.intersect(b)
    assert all(both.member(x) == (a.member(x) and b.member(x)) for x in box(2, 5))


@settings(max_examples=40, deadline=None)
@given(rows)
def test_facets_cover_boundary(r):
    c = ConeH.make(2, [], r)
    fs = c.facets()
    for x in box(2, 5):
        if c.member(x) and c.cone_dim == 2:
            assert (not c.interior_member(x)) == any(f.member(x) for f in fs)


@settings(max_examples=40, deadline=None)
@given(rows, rows)
def test_definable_closure_is_limit(gt, geq):
    d = DefinableCone.make(2, gt=gt, geq=geq)
    cl = definable_closure(d)
    for x in box(2, 4):
        if d.member(x):
            assert cl.member(x)
    w = d.witness()
    if w is None:
        return
    for x in box(2, 3):
        if cl.member(x) and any(x):
            # x + eps * w stays in the definable cone for small eps
            for k in (1, 10, 100):
                y = tuple(Fraction(a) + Fraction(b, k) for a, b in zip(x, w))
                scale = lcm(*(v.denominator for v in y))
                assert d.member(tuple(int(v * scale) for v in y))
