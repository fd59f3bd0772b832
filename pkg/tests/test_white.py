import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equidecomp.acceptance import coprime_pairs, random_unimodular
from equidecomp.exact import NotCoprime
from equidecomp.geometry import Simplex
from equidecomp.triangulation import NotEmpty
from equidecomp.white import (
    canonical_p,
    white_normal_form,
    white_tetrahedron,
    white_vertices,
    width_one_direction,
)

UNIT = Simplex([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)])


def test_width_one_of_white_tetrahedron():
    assert width_one_direction(white_tetrahedron(7, 12)) == (0, 0, 1)


def test_width_one_of_unit_tetrahedron():
    w = width_one_direction(UNIT)
    values = sorted(sum(a * b for a, b in zip(w, v)) for v in UNIT.vertices)
    assert values[-1] - values[0] == 1


def test_width_one_rejects_non_empty():
    with pytest.raises(NotEmpty):
        width_one_direction(Simplex([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 3)]))


def test_normal_form_examples():
    wf = white_normal_form(white_tetrahedron(7, 12))
    assert (wf.p, wf.q, wf.p_canonical) == (7, 12, 5)
    wf = white_normal_form(UNIT)
    assert (wf.p, wf.q, wf.p_canonical) == (0, 1, 0)


def test_canonical_p():
    assert canonical_p(7, 12) == 5
    assert canonical_p(2, 5) == 2
    assert canonical_p(1, 1) == 0
    with pytest.raises(NotCoprime):
        canonical_p(2, 4)


def test_fifty_images_of_t25():
    rng = random.Random(5)
    for _ in range(50):
        u = random_unimodular(rng)
        wf = white_normal_form(Simplex(u.apply_all(white_vertices(2, 5))))
        assert (wf.q, wf.p_canonical) == (5, 2)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(coprime_pairs(9)), st.integers(0, 10**6))
def test_normal_form_is_invariant(pq, seed):
    p, q = pq
    u = random_unimodular(random.Random(seed))
    t = Simplex(u.apply_all(white_vertices(p, q)))
    wf = white_normal_form(t)
    assert wf.q == q and wf.p_canonical == canonical_p(p, q)
    assert wf.map.is_unimodular()
    assert set(wf.map.apply_all(t.vertices)) == set(white_vertices(wf.p, wf.q))
