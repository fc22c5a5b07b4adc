from hypothesis import given, settings, strategies as st

from oracles import affine_rank, box, in_linear, linear_pairs, linear_sets
from vasgeo.periodic import FullPeriodic, GeneratorPeriodic, Lattice, fill
from vasgeo.cones import ConeV
from vasgeo.semilinear import (
    ConstraintCell,
    LinearSet,
    Semilinear,
    boundary,
    cell_to_semilinear,
    complement_decompose,
    dim,
    interior,
    linear_from_generators,
    linear_intersect,
)


def line(b, d):
    return linear_from_generators((b,), [(d,)])


def pts_of(comps, n, r):
    return Semilinear.of(n, comps).enumerate_box(r)


def assert_disjoint(comps, n, r):
    seen = set()
    for c in comps:
        here = set(c.enumerate_box(r))
        assert not (here & seen)
        seen |= here


def test_member_examples():
    assert linear_from_generators((0, 0), [(2, 0), (2, 2)]).member((0, 0))
    s = Semilinear.of(1, [line(k, 3) for k in range(3)])
    assert s.member((0,)) and all(s.member((x,)) for x in range(30))
    assert linear_from_generators((0, 0), [(1, 0), (1, 2), (1, 3)]).member((1, 1))


def test_linear_intersect_examples():
    l = linear_from_generators((1, 0), [(1, 1), (0, 2)])
    both = linear_intersect(l, l)
    assert both.bases == ((1, 0),)
    assert set(both.enumerate_box(15)) == set(l.enumerate_box(15))
    assert linear_intersect(line(1, 3), line(2, 3)).is_empty
    six = linear_intersect(line(0, 2), line(0, 3))
    assert six.bases == ((0,),)
    assert six.enumerate_box(30) == [(k,) for k in range(0, 31, 6)]


def test_complement_examples():
    n2 = Semilinear.universe(2)
    assert complement_decompose(n2.components[0], n2) == []
    comps = complement_decompose(LinearSet((1, 1), FullPeriodic.orthant(2)), n2)
    assert set(pts_of(comps, 2, 12)) == {x for x in box(2, 12) if min(x) == 0}
    assert_disjoint(comps, 2, 12)
    comps = complement_decompose(line(0, 3), Semilinear.universe(1))
    assert sorted(c.base for c in comps) == [(1,), (2,)]
    assert all(c.periodic.member((3,)) and not c.periodic.member((1,)) for c in comps)


def test_cell_to_semilinear_examples():
    got = cell_to_semilinear(ConstraintCell(1, geqs=(((1,), 1),)))
    assert len(got) == 1 and got[0].base == (1,) and got[0].periodic.same_set(FullPeriodic.orthant(1))
    got = cell_to_semilinear(ConstraintCell(1, geqs=(((1,), 3),), congs=(((1,), 2, 1),)))
    assert len(got) == 1 and got[0].base == (3,)
    assert got[0].enumerate_box(20) == [(k,) for k in range(3, 21, 2)]
    cell = ConstraintCell(2, geqs=(((1, -1), 0), ((0, 1), 1)))
    got = cell_to_semilinear(cell)
    assert set(pts_of(got, 2, 20)) == {x for x in box(2, 20) if x[0] >= x[1] >= 1}
    assert_disjoint(got, 2, 20)


def test_dim_examples():
    point = fill(GeneratorPeriodic.make(2, []))
    finite = Semilinear.of(2, [LinearSet(p, point) for p in [(0, 1), (3, 2)]])
    assert dim(finite) == 0
    assert dim(linear_from_generators((0, 0), [(2, 0), (2, 2)])) == 2
    assert dim(line(4, 7)) == 1
    assert dim(Semilinear.empty(3)) == -1


def test_boundary_interior_examples():
    n2 = LinearSet((0, 0), FullPeriodic.orthant(2))
    assert set(boundary(n2).enumerate_box(10)) == {x for x in box(2, 10) if min(x) == 0}
    assert set(interior(n2).enumerate_box(10)) == {x for x in box(2, 10) if min(x) >= 1}
    l = line(2, 3)
    assert boundary(l).enumerate_box(20) == [(2,)]
    assert interior(l).enumerate_box(20) == [(k,) for k in range(5, 21, 3)]
    q = FullPeriodic.make(ConeV.make(2, [(1, 0), (1, 3)]).hrep, Lattice.full(2))
    l = LinearSet((0, 0), q)
    expect = {x for x in box(2, 15) if x[1] == 0 or x[1] == 3 * x[0]}
    assert set(boundary(l).enumerate_box(15)) == expect


def test_enumerate_and_union():
    s = Semilinear.of(1, [line(1, 3), line(2, 3)])
    assert s.enumerate_box(7) == [(1,), (2,), (4,), (5,), (7,)]
    assert Semilinear.empty(1).union(s).enumerate_box(20) == s.enumerate_box(20)


# --- properties ---------------------------------------------------------------

def bound_for(n):
    return {1: 40, 2: 14, 3: 7}[n]


@settings(max_examples=40, deadline=None)
@given(linear_sets())
def test_linear_set_matches_fill_oracle(data):
    l, base, gens = data
    n = len(base)
    r = bound_for(n)
    for x in box(n, r):
        assert l.member(x) == in_linear(base, gens, x)


@settings(max_examples=40, deadline=None)
@given(linear_pairs())
def test_linear_intersect_is_pointwise(data):
    n, (l1, b1, g1), (l2, b2, g2) = data
    h = linear_intersect(l1, l2)
    r = bound_for(n)
    for x in box(n, r):
        assert h.member(x) == (in_linear(b1, g1, x) and in_linear(b2, g2, x))
    if not h.is_empty:
        for x in box(n, 4):
            assert h.periodic.member(x) == (l1.periodic.member(x) and l2.periodic.member(x))


@settings(max_examples=30, deadline=None)
@given(linear_pairs())
def test_complement_decompose_partitions(data):
    n, (l, b, g), (s1, _, _) = data
    s = Semilinear.of(n, [s1])
    comps = complement_decompose(l, s)
    r = bound_for(n)
    pts = set(pts_of(comps, n, r))
    assert_disjoint(comps, n, r)
    for x in box(n, r):
        assert (x in pts) == (s1.member(x) and not l.member(x))


@settings(max_examples=30, deadline=None)
@given(linear_sets())
def test_boundary_interior_partition(data):
    l, base, gens = data
    n = len(base)
    r = bound_for(n)
    bd, it = boundary(l), interior(l)
    for x in box(n, r):
        a, b = bd.member(x), it.member(x)
        assert not (a and b)
        assert (a or b) == l.member(x)
    if l.dim >= 1:
        assert dim(bd) < l.dim


@settings(max_examples=30, deadline=None)
@given(linear_sets(), st.lists(st.integers(0, 3), min_size=3, max_size=3))
def test_dim_matches_affine_rank_and_translation(data, shift):
    l, base, gens = data
    n = len(base)
    assert dim(l) == affine_rank([base] + [tuple(a + c for a, c in zip(base, g)) for g in gens])
    moved = LinearSet(tuple(a + c for a, c in zip(base, shift)), l.periodic)
    assert dim(moved) == dim(l)
    other = line(0, 1) if n == 1 else LinearSet((0,) * n, fill(GeneratorPeriodic.make(n, [])))
    assert dim(Semilinear.of(n, [l, other])) == max(dim(l), dim(other))


@settings(max_examples=25, deadline=None)
@given(linear_pairs(max_dim=2), linear_sets(max_dim=2))
def test_intersect_distributes_over_union(data, extra):
    n, (a, _, _), (b, _, _) = data
    c = extra[0]
    if len(c.base) != n:
        return
    s = Semilinear.of(n, [a])
    u = Semilinear.of(n, [b, c])
    lhs = set(s.intersect(u).enumerate_box(12))
    rhs = set(s.intersect(Semilinear.of(n, [b])).enumerate_box(12)) | \
        set(s.intersect(Semilinear.of(n, [c])).enumerate_box(12))
    assert lhs == rhs
