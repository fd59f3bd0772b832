from collections import Counter
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equidecomp.acceptance import random_unimodular
from equidecomp.ehrhart import SimplexType, closed_form, count, fit_quasipolynomial
from equidecomp.exact import NotCoprime, UnimodularMap
from equidecomp.geometry import PolytopeV, Simplex, pairwise_disjoint, volume
from equidecomp.halfunimodular import (
    DegeneratePolygon,
    NotHalfUnimodular,
    audit_points,
    canonical_map,
    certify_decomposition,
    classify,
    decompose_polytope,
    decompose_T_minus,
    decompose_T_plus,
    fundamental_points,
    interior_open_decomposition,
    is_half_unimodular,
    open_template,
    triangulate_monotone_region,
    type_vector,
)
from equidecomp.triangulation import NotLatticePolytope

H = F(1, 2)
UNIT = PolytopeV([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])


def test_fundamental_points_of_7_12():
    fp = fundamental_points(7, 12)
    assert len(fp.a) == len(fp.b) == 13
    assert fp.a[0] == fp.b[0] == (0, 0, H)
    assert fp.a[-1] == fp.b[-1] == (4, 6, H)
    assert (-7 * fp.p_prime) % 12 == 1
    # the y coordinates of the a_i increase in steps of 1/2
    assert [2 * v[1] for v in fp.a] == list(range(13))


def test_fundamental_points_rejects_bad_input():
    with pytest.raises(NotCoprime):
        fundamental_points(2, 4)
    with pytest.raises(ValueError):
        fundamental_points(5, 3)


def test_monotone_region_of_7_12():
    fp = fundamental_points(7, 12)
    tris = triangulate_monotone_region(list(fp.a) + [(F(7, 2), 6, H)])
    assert len(tris) == 12


def test_convex_quadrilateral():
    assert len(triangulate_monotone_region([(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0)])) == 2


def test_collinear_vertices_are_not_clipped():
    poly = [(0, 0, 0), (1, 0, 0), (2, 0, 0), (2, 2, 0), (0, 2, 0)]
    tris = triangulate_monotone_region(poly)
    assert len(tris) == 3
    assert all(Simplex(t).dim == 2 for t in tris)


def test_flat_polygon_rejected():
    with pytest.raises(DegeneratePolygon):
        triangulate_monotone_region([(0, 0, 0), (1, 0, 0), (2, 0, 0)])


@pytest.mark.parametrize("pq", [(0, 1), (1, 2), (2, 5), (7, 12)])
def test_halves(pq):
    p, q = pq
    for cells in (decompose_T_minus(p, q), decompose_T_plus(p, q)):
        assert len(cells) == 4 * q
        assert sum(volume(c) for c in cells) == F(q, 12)
        assert {classify(c) for c in cells} == {SimplexType.D3_1}
        assert pairwise_disjoint(cells) == []


def test_classify_examples():
    assert classify(Simplex([(H, 0, 0), (0, H, 0), (H, H, 0)])) == SimplexType.D2_PRIME
    assert classify(Simplex([(H, H, H)])) == SimplexType.D0_0
    assert classify(Simplex([(0, 0, 0), (H, 0, 0), (0, H, 0), (0, 0, H)])) == SimplexType.D3_1


@pytest.mark.parametrize("t", list(SimplexType), ids=lambda t: t.name)
def test_classify_representatives(t):
    assert classify(t.representative) is t
    assert is_half_unimodular(t.representative)


def test_classify_rejects_other_simplices():
    with pytest.raises(NotHalfUnimodular):
        classify(Simplex([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]))
    with pytest.raises(NotHalfUnimodular):
        classify(Simplex([(0, 0, 0), (F(1, 3), 0, 0)]))


def test_canonical_map_of_translate():
    s = Simplex([(1, 1, 1), (F(3, 2), 1, 1), (1, F(3, 2), 1), (1, 1, F(3, 2))])
    m = canonical_map(s)
    assert m.linear == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert m.translation == (-1, -1, -1)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(list(SimplexType)), st.integers(0, 10**6))
def test_canonical_map_inverts_random_images(t, seed):
    import random

    u = random_unimodular(random.Random(seed))
    s = Simplex(u.apply_all(t.representative.vertices))
    assert classify(s) is t
    m = canonical_map(s)
    assert m.is_unimodular()
    assert set(m.apply_all(s.vertices)) == set(t.canonical_vertices)


def test_open_templates():
    assert [ty for _, ty in open_template(0)] == [SimplexType.D0_1]
    one = open_template(1)
    assert Counter(ty for _, ty in one) == {SimplexType.D1_1: 2, SimplexType.D0_0: 1}
    two = open_template(2)
    assert len(two) == 7
    assert Counter(ty for _, ty in two) == {
        SimplexType.D2_1: 4, SimplexType.D1_1: 1, SimplexType.D1_0: 2}
    for i in range(3):
        total = sum((closed_form(ty) for _, ty in open_template(i)[1:]),
                    closed_form(open_template(i)[0][1]))
        standard = Simplex([(0, 0, 0), (1, 0, 0), (0, 1, 0)][: i + 1])
        assert total == fit_quasipolynomial(standard, "relint")


@pytest.mark.parametrize("pq", [(0, 1), (1, 2), (2, 5), (3, 7)])
def test_interior_decomposition(pq):
    p, q = pq
    pieces = interior_open_decomposition(p, q)
    tv = type_vector(pieces)
    assert tv[SimplexType.D3_1] == 8 * q
    assert tv[SimplexType.D2_PRIME] == tv[SimplexType.D3_PRIME] == 0
    t = PolytopeV([(0, 0, 0), (1, 0, 0), (0, 0, 1), (p, q, 1)])
    simplices = [pc.simplex for pc in pieces]
    for s in (1, 2, 4):
        assert audit_points(simplices, t, s, "relint") == (0, 0, 0)
    assert pairwise_disjoint(simplices) == []
    assert all(pc.check() for pc in pieces)


def test_decompose_unit_tetrahedron():
    d = decompose_polytope(UNIT)
    tv = type_vector(d)
    assert tv[SimplexType.D3_1] == 8
    for k in range(1, 11):
        assert sum(n * closed_form(t)(k) for t, n in tv.items()) == count(UNIT, k)
    assert all(certify_decomposition(d).values())


def test_decompose_intro_p_prime():
    p = PolytopeV([(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (1, 1, 1), (1, 0, -1)])
    d = decompose_polytope(p)
    assert all(certify_decomposition(d).values())


def test_decompose_lower_dimensional_input():
    d = decompose_polytope(PolytopeV([(0, 0), (2, 0), (0, 1)]))
    assert all(certify_decomposition(d).values())
    assert type_vector(d)[SimplexType.D3_1] == 0


def test_decompose_rejects_rational_input():
    with pytest.raises(NotLatticePolytope):
        decompose_polytope(PolytopeV([(0, 0, 0), (H, 0, 0), (0, 1, 0), (0, 0, 1)]))


def test_type_vector_of_nothing():
    assert set(type_vector([]).values()) == {0}


def test_decomposition_is_equivariant():
    m = UnimodularMap(((1, 2, 0), (0, 1, 0), (1, 1, 1)), (3, -1, 2))
    p = PolytopeV([(0, 0, 0), (2, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)])
    q = PolytopeV(m.apply_all(p.vertices))
    assert type_vector(decompose_polytope(p)) == type_vector(decompose_polytope(q))
