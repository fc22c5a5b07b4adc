import pytest
from hypothesis import given, settings, strategies as st

from oracles import box
from vasgeo.decompose import IRREDUCIBLE, SUBSET, IsSemilinear, semilinearity_decide, theorem1_partition
from vasgeo.errors import BudgetExceeded, InputError
from vasgeo.semilinear import Semilinear
from vasgeo.smooth import AlmostHybridRep
from vasgeo.vas import Vas, bounded_reach, catalog, catalog_entry, doubling_vas, member_bounded, vas_from_json


def naive_reach(init, transitions, bound):
    """Fixpoint iteration over whole frontiers, independent of the BFS queue."""
    reach = {tuple(init)}
    while True:
        new = {tuple(a + b for a, b in zip(x, t)) for x in reach for t in transitions}
        new = {y for y in new if min(y) >= 0 and max(y) <= bound} - reach
        if not new:
            return reach
        reach |= new


def test_diagonal():
    v = Vas.make(2, (0, 0), [(1, 1)])
    r = bounded_reach(v, 10)
    assert r.points == tuple((k, k) for k in range(11))
    assert not r.saturated
    assert member_bounded(v, (0, 0), 10)
    assert not member_bounded(v, (1, 2), 10)


def test_free_orthant_fills_box():
    r = bounded_reach(Vas.make(2, (0, 0), [(1, 0), (0, 1)]), 7)
    assert set(r.points) == set(box(2, 7))


def test_saturated_when_box_closed():
    r = bounded_reach(Vas.make(1, (3,), [(-1,)]), 5)
    assert r.saturated and r.points == ((0,), (1,), (2,), (3,))


def test_errors():
    v = Vas.make(2, (4, 0), [(1, 1)])
    with pytest.raises(InputError):
        bounded_reach(v, 3)
    with pytest.raises(BudgetExceeded):
        bounded_reach(Vas.make(2, (0, 0), [(1, 0), (0, 1)]), 30, budget=5)
    with pytest.raises(InputError):
        Vas.make(2, (-1, 0), [])
    with pytest.raises(InputError):
        vas_from_json({"type": "vas", "dim": 2, "initial": [0, -1], "transitions": []})


def test_json_round_trip():
    v = doubling_vas()
    assert vas_from_json(v.to_json()) == v


@pytest.mark.parametrize("bound", [4, 6, 8])
def test_doubling_matches_naive_oracle(bound):
    v = doubling_vas()
    r = bounded_reach(v, bound)
    assert set(r.points) == naive_reach(v.initial, v.transitions, bound)
    for x, y, z, p, p2, q, q2 in r.points:
        assert p + p2 + q + q2 == 1
        # p' and q' hold one unit of z (resp. y) in the control
        if p or p2:
            assert y + z + p2 <= 2 ** x
        else:
            assert 2 * y + z + 2 * q2 <= 2 ** (x + 1)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.integers(-2, 2), st.integers(-2, 2)), min_size=1, max_size=3),
       st.tuples(st.integers(0, 3), st.integers(0, 3)), st.integers(3, 7), st.integers(0, 5))
def test_reach_monotone_and_matches_oracle(ts, init, b1, extra):
    v = Vas.make(2, init, ts)
    small, big = bounded_reach(v, b1), bounded_reach(v, b1 + extra)
    assert set(small.points) <= set(big.points)
    assert set(small.points) == naive_reach(init, ts, b1)


@pytest.mark.parametrize("e", [e for e in catalog() if e.closed_form is not None], ids=lambda e: e.name)
def test_closed_forms(e):
    bound = 12 if e.dim == 2 else 5
    if e.vas is not None:
        r = bounded_reach(e.vas, bound)
        assert all(r.member(x) == e.closed_form(x) for x in box(e.dim, bound))
    if e.parts is not None:
        rep = AlmostHybridRep.make(e.parts)
        p = e.provider()
        for x in box(e.dim, bound):
            assert rep.member(x) == e.closed_form(x) == p.membership(x)


def test_catalog_verdicts():
    v = semilinearity_decide(catalog_entry("diagonal").provider())
    assert isinstance(v, IsSemilinear)
    assert all(v.representation.member(x) == (x[0] == x[1]) for x in box(2, 20))
    res = theorem1_partition(catalog_entry("orthant").provider(), Semilinear.universe(2))
    assert res.kinds() == [SUBSET]
    e = catalog_entry("appendixG")
    assert e.vas is None
    res = theorem1_partition(e.provider(), Semilinear.universe(3))
    assert res.kinds() == [IRREDUCIBLE]
    with pytest.raises(InputError):
        catalog_entry("nope")
