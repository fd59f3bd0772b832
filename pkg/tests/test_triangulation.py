from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equidecomp.geometry import PolytopeV, Simplex, lattice_points, polytope_volume, volume
from equidecomp.triangulation import (
    NotEmpty,
    NotLatticePolytope,
    empty_triangulation,
    normalize_low_dim_empty,
    open_face_partition,
)

CUBE = PolytopeV([(x, y, z) for x in (0, 1) for y in (0, 1) for z in (0, 1)])


def test_unit_tetrahedron_is_its_own_triangulation():
    t = empty_triangulation(PolytopeV([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]))
    assert len(t.cells) == 1
    assert len(open_face_partition(t)) == 15


def test_segment_splits_into_unit_segments():
    t = empty_triangulation(PolytopeV([(0,), (2,)]))
    assert len(t.cells) == 2


def test_cube():
    t = empty_triangulation(CUBE)
    assert len(t.cells) == 6
    assert sum(volume(c) for c in t.cells) == 1
    assert all(len(lattice_points(c)) == 4 for c in t.cells)


def test_unit_square_face_count():
    t = empty_triangulation(PolytopeV([(0, 0), (1, 0), (0, 1), (1, 1)]))
    dims = [d for _, d in open_face_partition(t)]
    assert (dims.count(0), dims.count(1), dims.count(2)) == (4, 5, 2)


def test_white_tetrahedron_single_cell():
    t = empty_triangulation(PolytopeV([(0, 0, 0), (1, 0, 0), (0, 0, 1), (2, 5, 1)]))
    assert len(t.cells) == 1 and len(t.faces) == 15


def test_non_lattice_input():
    with pytest.raises(NotLatticePolytope):
        empty_triangulation(PolytopeV([(0,), (F(1, 2),)]))


def test_normalize_segment():
    s = Simplex([(2, 3, 5), (3, 3, 5)])
    u = normalize_low_dim_empty(s)
    assert u.is_unimodular()
    assert u.apply_all(s.vertices) == ((0, 0, 0), (1, 0, 0))


def test_normalize_standard_triangle_is_identity():
    s = Simplex([(0, 0, 0), (1, 0, 0), (0, 1, 0)])
    u = normalize_low_dim_empty(s)
    assert u.apply_all(s.vertices) == s.vertices


def test_normalize_rejects_non_empty_triangle():
    with pytest.raises(NotEmpty):
        normalize_low_dim_empty(Simplex([(0, 0, 0), (1, 0, 0), (1, 2, 0)]))


coords = st.integers(0, 3)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(coords, coords, coords), min_size=1, max_size=7, unique=True))
def test_random_triangulations_are_empty_and_cover(pts):
    p = PolytopeV(pts)
    t = empty_triangulation(p)
    assert all(len(lattice_points(c)) == len(c.vertices) for c in t.cells)
    assert t.vertices == set(lattice_points(p))
    if p.dim == 3:
        assert sum(volume(c) for c in t.cells) == polytope_volume(p)
