import itertools

import pytest
from hypothesis import given, settings, strategies as st

from vasgeo.cones import ConeV
from vasgeo.errors import ConeMismatch, NotInLattice, NotMember
from vasgeo.periodic import (
    FullPeriodic,
    GeneratorPeriodic,
    Lattice,
    boundary_fill_cover,
    fill,
    finite_pump,
    generators_of,
    intersect_full,
    is_full,
    scale_into,
    subtract_shifted,
)

THREE_GENS = [(1, 0), (1, 2), (1, 3)]


def pts(n, r):
    return itertools.product(range(r + 1), repeat=n)


def star_brute(gens, n, r):
    """F* ∩ [0, r]^n by closure under adding generators."""
    seen = {(0,) * n}
    todo = [(0,) * n]
    while todo:
        x = todo.pop()
        for g in gens:
            y = tuple(a + b for a, b in zip(x, g))
            if max(y) <= r and y not in seen:
                seen.add(y)
                todo.append(y)
    return seen


def full(cone_gens, lat_gens, n=2):
    return FullPeriodic.make(ConeV.make(n, cone_gens).hrep, Lattice.from_generators(n, lat_gens))


def test_lattice_examples():
    lat = Lattice.from_generators(2, [(2, 0), (0, 2)])
    assert lat.member((2, 2)) and not lat.member((1, 1))
    assert lat.intersect(lat) == lat
    assert Lattice.from_generators(2, THREE_GENS) == Lattice.full(2)


def test_lattice_sum_and_intersect():
    a = Lattice.from_generators(1, [(2,)])
    b = Lattice.from_generators(1, [(3,)])
    assert a.intersect(b) == Lattice.from_generators(1, [(6,)])
    assert a.sum(b) == Lattice.full(1)


def test_fill_examples():
    f = fill(GeneratorPeriodic.make(2, THREE_GENS))
    assert set(f.cone.geq) == {(0, 1), (3, -1)} and f.lattice == Lattice.full(2)
    assert f.member((1, 1)) and not GeneratorPeriodic.make(2, THREE_GENS).member((1, 1))
    assert fill(GeneratorPeriodic.make(2, [])).dim == 0
    even = fill(GeneratorPeriodic.make(2, [(2, 0), (2, 2)]))
    star = star_brute([(2, 0), (2, 2)], 2, 30)
    assert all(even.member(x) == (x in star) for x in pts(2, 30))


def test_generators_examples():
    q = full([(1, 1), (1, 0)], [(2, 0), (0, 2)])
    star = star_brute(generators_of(q).generators, 2, 40)
    assert all(q.member(x) == (x in star) for x in pts(2, 40))
    assert set(generators_of(FullPeriodic.orthant(2)).generators) == {(1, 0), (0, 1)}
    q = full([(1, 0), (1, 3)], [(1, 0), (0, 1)])
    assert set(generators_of(q).generators) == {(1, 0), (1, 1), (1, 2), (1, 3)}


def test_is_full_examples():
    assert not is_full(GeneratorPeriodic.make(2, THREE_GENS))
    assert is_full(GeneratorPeriodic.make(2, [(2, 0), (2, 2)]))
    assert is_full(GeneratorPeriodic.make(2, []))


def test_membership_examples():
    p = GeneratorPeriodic.make(2, THREE_GENS)
    assert p.member((2, 3)) and not p.member((1, 1)) and p.member((0, 0))


def test_subtract_shifted_examples():
    s = subtract_shifted(FullPeriodic.orthant(2), (1, 1))
    expect = {x for x in pts(2, 25) if x[0] == 0 or x[1] == 0}
    assert set(s.enumerate_box(25)) == expect
    s = subtract_shifted(FullPeriodic.orthant(1), (3,))
    assert s.enumerate_box(25) == [(0,), (1,), (2,)]
    with pytest.raises(NotMember):
        subtract_shifted(FullPeriodic.orthant(1), (-1,))


def test_subtract_shifted_narrow_cone():
    q = full([(1, 0), (1, 3)], [(1, 0), (0, 1)])
    s = subtract_shifted(q, (1, 0))
    brute = {x for x in pts(2, 25) if q.member(x) and not q.member((x[0] - 1, x[1]))}
    assert set(s.enumerate_box(25)) == brute
    assert s.dim < q.dim


def test_scale_into_examples():
    q = FullPeriodic.orthant(2)
    assert scale_into(q, q) == 1
    two = full([(1,)], [(2,)], 1)
    six = full([(1,)], [(6,)], 1)
    lam = scale_into(two, six)
    assert all(six.member((lam * k,)) for k in range(0, 20, 2))
    even = full([(1, 0), (0, 1)], [(2, 0), (0, 2)])
    lam = scale_into(q, even)
    assert all(even.member((lam * a, lam * b)) for a, b in pts(2, 6))
    with pytest.raises(ConeMismatch):
        scale_into(q, full([(1, 1)], [(1, 1)]))


def test_finite_pump_examples():
    p0 = finite_pump(GeneratorPeriodic.make(2, [(1, 0), (0, 1)]), [(-1, 0)])
    assert min(p0) >= 0 and p0[0] - 1 >= 0
    p = GeneratorPeriodic.make(2, THREE_GENS)
    p0 = finite_pump(p, [(0, 1)])
    assert p.member(p0) and p.member((p0[0], p0[1] + 1))
    assert finite_pump(p, []) == (0, 0)
    with pytest.raises(NotInLattice):
        finite_pump(GeneratorPeriodic.make(1, [(2,)]), [(1,)])


def test_boundary_fill_cover_examples():
    assert boundary_fill_cover(FullPeriodic.orthant(2)) == [(1, 1)]
    assert boundary_fill_cover(FullPeriodic.orthant(1)) == [(1,)]
    q = full([(1, 0), (1, 3)], [(1, 0), (0, 1)])
    fs = boundary_fill_cover(q)
    assert all(q.interior_member(f) for f in fs)
    star = star_brute(fs, 2, 20)
    bd = [x for x in pts(2, 20) if q.member(x) and not q.interior_member(x)]
    covered = {tuple(a + b for a, b in zip(x, y)) for x in bd for y in star}
    assert all(x in covered for x in pts(2, 20) if q.member(x))


def test_intersect_full_examples():
    q = FullPeriodic.orthant(2)
    assert intersect_full(q, q).same_set(q)
    even = intersect_full(q, full([(1, 0), (0, 1), (-1, 0), (0, -1)], [(2, 0), (0, 2)]))
    assert all(even.member(x) == (x[0] % 2 == 0 and x[1] % 2 == 0) for x in pts(2, 20))


# --- properties ---------------------------------------------------------------

gen_sets = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=3)


@settings(max_examples=30, deadline=None)
@given(gen_sets)
def test_fill_contains_and_is_idempotent(gs):
    p = GeneratorPeriodic.make(2, gs)
    f = fill(p)
    star = star_brute(p.generators, 2, 15)
    assert all(f.member(x) for x in star)
    f2 = fill(GeneratorPeriodic.make(2, generators_of(f).generators))
    assert all(f.member(x) == f2.member(x) for x in pts(2, 15))


@settings(max_examples=30, deadline=None)
@given(gen_sets)
def test_generators_recover_full_set(gs):
    q = fill(GeneratorPeriodic.make(2, gs))
    star = star_brute(generators_of(q).generators, 2, 15)
    assert all(q.member(x) == (x in star) for x in pts(2, 15))


@settings(max_examples=30, deadline=None)
@given(gen_sets, st.tuples(st.integers(0, 4), st.integers(0, 4)))
def test_subtract_shifted_partitions(gs, y):
    q = fill(GeneratorPeriodic.make(2, gs))
    x = tuple(sum(c * g[i] for c, g in zip(y, q.generators[:2])) for i in range(2))
    s = subtract_shifted(q, x)
    for z in pts(2, 15):
        shifted = q.member(tuple(a - b for a, b in zip(z, x)))
        assert s.member(z) == (q.member(z) and not shifted)
    assert s.dim < q.dim


@settings(max_examples=30, deadline=None)
@given(gen_sets, st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3)), max_size=3))
def test_finite_pump_postcondition(gs, fs):
    p = GeneratorPeriodic.make(2, gs)
    lat = fill(p).lattice
    fs = [f for f in fs if lat.member(f)]
    p0 = finite_pump(p, fs)
    assert p.member(p0)
    assert all(p.member(tuple(a + b for a, b in zip(p0, f))) for f in fs)


@settings(max_examples=25, deadline=None)
@given(gen_sets, gen_sets, st.tuples(st.integers(0, 3), st.integers(0, 3)))
def test_shift_containment_forces_generators(pg, qg, c):
    # c + Q ⊆ P (box-checked) implies every generator of Q lies in the full set P
    p = fill(GeneratorPeriodic.make(2, pg))
    qgen = GeneratorPeriodic.make(2, qg)
    star = star_brute(qgen.generators, 2, 12)
    if all(p.member(tuple(a + b for a, b in zip(c, y))) for y in star):
        assert all(p.member(g) for g in qgen.generators)
