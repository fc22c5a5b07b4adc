from hypothesis import given, settings, strategies as st

from oracles import affine_rank, box
from vasgeo.decompose import (
    EMPTY,
    IRREDUCIBLE,
    SUBSET,
    UNCLASSIFIED,
    WEAK,
    AnnotatedProvider,
    BoxHeuristicProvider,
    IsSemilinear,
    Line,
    NotInfinite,
    NotSemilinear,
    common_partition,
    find_infinite_line,
    full_linear_partition,
    partition,
    semilinearity_decide,
    theorem1_partition,
)
from vasgeo.extraction import rep_family, verify_certificate
from vasgeo.semilinear import LinearSet, Semilinear, linear_from_generators
from vasgeo.smooth import GeneratorModel, LogModel, ParabolaModel

N2 = GeneratorModel.of(2, [(1, 0), (0, 1)])
PARABOLA = ParabolaModel(2, 0, 1, (0, 0, 1))
LOG3 = LogModel(2, 0, 1, 3)
B = 25


def annotated(*parts):
    return AnnotatedProvider(list(parts))


def nothing(n=2):
    return BoxHeuristicProvider(lambda x: False, n)


def check_cover(res, s, n, bound=B):
    """Cells pairwise disjoint, union = s, on the box."""
    seen = {}
    for i, c in enumerate(res.cells):
        for x in c.region.enumerate_box(bound):
            assert x not in seen, f"{x} in cells {seen[x]} and {i}"
            seen[x] = i
    assert set(seen) == set(s.enumerate_box(bound))


def check_sound(res, member, bound=B):
    for c in res.cells:
        pts = c.region.enumerate_box(bound)
        if c.kind == EMPTY:
            assert not any(member(x) for x in pts)
        elif c.kind == SUBSET:
            assert all(member(x) for x in pts)
        elif c.kind == IRREDUCIBLE:
            assert verify_certificate(rep_family(c.classification.rep), c.classification.certificate)


def check_dimension(res, member, bound=B):
    for c in res.cells:
        if c.kind in (SUBSET, IRREDUCIBLE):
            inside = [x for x in c.region.enumerate_box(bound) if member(x)]
            assert affine_rank(inside) == c.region.dim


def test_partition_of_nothing_is_one_empty_cell():
    s = Semilinear.universe(2)
    res = partition(nothing(), s)
    assert res.kinds() == [EMPTY]
    check_cover(res, s, 2)


def test_partition_of_everything():
    s = Semilinear.universe(2)
    res = theorem1_partition(annotated(((0, 0), N2)), s)
    assert res.kinds() == [SUBSET]


def test_partition_parabola_weak_stage():
    s = Semilinear.universe(2)
    p = annotated(((0, 0), PARABOLA))
    res = partition(p, s)
    check_cover(res, s, 2)
    for c in res.cells:
        assert c.kind in (EMPTY, WEAK, SUBSET)
        if c.kind == WEAK:
            for x in c.region.enumerate_box(B):
                if p.membership(x):
                    assert c.region.member(x)
    assert res.budget_report["max_depth"] <= 2 * 2 + 1


def test_refine_splits_residues():
    three = GeneratorModel.of(1, [(3,)])
    p = annotated(((1,), three), ((2,), three))
    s = Semilinear.of(1, [LinearSet((1,), linear_from_generators((0,), [(3,)]).periodic),
                          LinearSet((2,), linear_from_generators((0,), [(3,)]).periodic)])
    res = full_linear_partition(p, s)
    bases = sorted(c.region.base for c in res.cells if c.kind != EMPTY)
    assert bases == [(1,), (2,)]
    check_cover(res, s, 1, 60)


def test_already_full_linear_unchanged():
    p = annotated(((0, 0), N2))
    res = full_linear_partition(p, Semilinear.universe(2))
    assert len(res.cells) == 1 and res.cells[0].region.base == (0, 0)


def test_theorem1_parabola():
    s = Semilinear.universe(2)
    p = annotated(((0, 0), PARABOLA))
    res = theorem1_partition(p, s)
    check_cover(res, s, 2)
    check_sound(res, p.membership)
    irr = [c for c in res.cells if c.kind == IRREDUCIBLE]
    assert irr and all(c.region.dim == 2 for c in irr)


def test_theorem1_shifted_quadrant():
    s = Semilinear.universe(2)
    p = annotated(((1, 1), N2))
    res = theorem1_partition(p, s)
    check_cover(res, s, 2)
    check_sound(res, p.membership)
    subs = [c for c in res.cells if c.kind == SUBSET]
    assert len(subs) == 1 and subs[0].region.base == (1, 1)
    assert all(c.kind in (EMPTY, SUBSET) for c in res.cells)


def test_semilinearity_examples():
    p = annotated(((0, 0), GeneratorModel.of(2, [(1, 0), (1, 2)])))
    v = semilinearity_decide(p)
    assert isinstance(v, IsSemilinear)
    assert all(v.representation.member(x) == p.membership(x) for x in box(2, B))
    assert isinstance(semilinearity_decide(annotated(((0, 0), PARABOLA))), NotSemilinear)
    three = GeneratorModel.of(1, [(3,)])
    v = semilinearity_decide(annotated(((1,), three), ((2,), three)))
    assert isinstance(v, IsSemilinear) and len(v.representation.components) == 2
    assert v.representation.enumerate_box(30) == [(k,) for k in range(31) if k % 3]


def test_box_heuristic_diagonal():
    p = BoxHeuristicProvider(lambda x: x[0] == x[1], 2)
    v = semilinearity_decide(p)
    assert isinstance(v, IsSemilinear) and not v.partition.certified
    assert all(v.representation.member(x) == (x[0] == x[1]) for x in box(2, 20))


def test_infinite_line_examples():
    line = find_infinite_line(nothing(), Semilinear.universe(2))
    assert isinstance(line, Line) and any(line.direction)
    p = annotated(((0, 0), PARABOLA))
    line = find_infinite_line(p)
    assert isinstance(line, Line) and any(line.direction)
    assert all(not PARABOLA.member(line.point(k)) for k in range(100))
    assert isinstance(find_infinite_line(annotated(((0, 0), N2))), NotInfinite)


def test_common_partition_same_set():
    p = annotated(((0, 0), PARABOLA))
    res = common_partition(p, p)
    check_cover(res, Semilinear.universe(2), 2)
    for c in res.cells:
        assert c.classification.kind == c.second.kind


def test_common_partition_disjoint_sets():
    a = annotated(((0, 0), GeneratorModel.of(2, [(2, 0), (0, 2)])))
    b = annotated(((1, 1), GeneratorModel.of(2, [(2, 0), (0, 2)])))
    res = common_partition(a, b)
    check_cover(res, Semilinear.universe(2), 2)
    assert not any(c.kind == SUBSET and c.second.kind == SUBSET for c in res.cells)


def test_common_partition_parabola_log():
    a, b = annotated(((0, 0), PARABOLA)), annotated(((0, 0), LOG3))
    res = common_partition(a, b)
    s = Semilinear.universe(2)
    check_cover(res, s, 2)
    for c in res.cells:
        for which, prov in ((c.classification, a), (c.second, b)):
            pts = c.region.enumerate_box(B)
            if which.kind == EMPTY:
                assert not any(prov.membership(x) for x in pts)
            elif which.kind == SUBSET:
                assert all(prov.membership(x) for x in pts)
    assert all(c.kind != UNCLASSIFIED and c.second.kind != UNCLASSIFIED for c in res.cells)


# --- properties ---------------------------------------------------------------

vec2 = st.tuples(st.integers(0, 3), st.integers(0, 3))
gen_sets = st.lists(vec2.filter(any), min_size=1, max_size=2)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.tuples(vec2, gen_sets), min_size=1, max_size=2))
def test_semilinear_inputs_decompose_soundly(parts):
    p = annotated(*[(b, GeneratorModel.of(2, gs)) for b, gs in parts])
    s = Semilinear.universe(2)
    res = theorem1_partition(p, s)
    check_cover(res, s, 2, 14)
    check_sound(res, p.membership, 14)
    assert IRREDUCIBLE not in res.kinds()
    assert res.budget_report["max_depth"] <= 2 * (2 * 2 + 1)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([PARABOLA, LOG3, ParabolaModel(2, 0, 1, (0, 1)), ParabolaModel(2, 1, 0, (0, 0, 1))]),
       vec2)
def test_smooth_inputs_decompose_soundly(m, b):
    p = annotated((b, m))
    s = Semilinear.universe(2)
    res = theorem1_partition(p, s)
    check_cover(res, s, 2, 20)
    check_sound(res, p.membership, 20)
    check_dimension(res, p.membership, 20)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([PARABOLA, LOG3, ParabolaModel(2, 1, 0, (0, 1, 1)), GeneratorModel.of(2, [(2, 0), (1, 3)])]),
       vec2, vec2, st.tuples(st.integers(0, 2), st.integers(0, 2)).filter(any))
def test_line_cells_partition_the_line(m, b, c, g):
    p = annotated((b, m), ((0, 0), LOG3))
    line = linear_from_generators(c, [g])
    cells = p.line_cells(line)
    assert cells is not None
    for k in range(150):
        x = tuple(a + k * d for a, d in zip(c, g))
        hits = [inside for l, inside in cells if l.member(x)]
        assert hits == [p.membership(x)]
