from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equidecomp.exact import (
    NotCoprime,
    NotSaturated,
    UnimodularMap,
    complete_to_basis,
    det,
    hnf,
    int_inverse,
    integer_kernel,
    inv_mod,
    matmul,
    nullspace,
    rank,
    row_echelon,
    small_unimodular,
    solve_integer,
    transpose,
)

small_ints = st.integers(-6, 6)


def matrices(rows, cols):
    return st.lists(st.lists(small_ints, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def test_det_examples():
    assert det([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == 1
    assert det([[1, 0, 0], [0, 0, 1], [3, 5, 1]]) == -5
    assert det([[1, 0, 0], [2, 0, 0], [0, 0, 1]]) == 0


def test_hnf_identity():
    eye = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    h, u = hnf(eye)
    assert h == eye and u == eye


def test_hnf_single_column():
    h, u = hnf([[2], [4], [6]])
    assert h == ((2,), (4,), (6,))
    assert u == ((1,),)


def test_hnf_two_columns_has_unit_pivots():
    m = [[1, 0], [2, 0], [0, 1]]
    h, u = hnf(m)
    assert matmul(m, u) == h
    assert abs(det(u)) == 1
    assert h[0][0] == 1 and h[2][1] == 1


def _is_column_echelon(h):
    cols = transpose(h)
    last = -1
    for col in cols:
        nz = [i for i, x in enumerate(col) if x]
        if not nz:
            last = len(h)
            continue
        if nz[0] <= last:
            return False
        if col[nz[0]] <= 0:
            return False
        last = nz[0]
    return True


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 4).flatmap(lambda r: st.integers(1, 4).flatmap(lambda c: matrices(r, c))))
def test_hnf_invariants(m):
    h, u = hnf(m)
    assert matmul(m, u) == h
    assert abs(det(u)) == 1
    assert _is_column_echelon(h)
    assert rank(m) == sum(1 for col in transpose(h) if any(col))


def test_complete_to_basis_examples():
    assert complete_to_basis([(1, 0, 0)]) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    w = complete_to_basis([(1, 2, 0)])
    assert tuple(row[0] for row in w) == (1, 2, 0)
    assert abs(det(w)) == 1
    with pytest.raises(NotSaturated):
        complete_to_basis([(2, 0, 0)])


@settings(max_examples=60, deadline=None)
@given(matrices(2, 3))
def test_complete_to_basis_keeps_columns(vs):
    try:
        w = complete_to_basis(vs, 3)
    except NotSaturated:
        # either dependent or spanning a non-saturated sublattice
        if rank(vs) == 2:
            k = integer_kernel(vs, 3)
            assert len(k) == 1
        return
    assert abs(det(w)) == 1
    for j, v in enumerate(vs):
        assert tuple(row[j] for row in w) == tuple(v)


def test_inv_mod():
    assert inv_mod(5, 12) == 5
    assert inv_mod(1, 7) == 1
    with pytest.raises(NotCoprime):
        inv_mod(4, 12)


@given(st.integers(2, 60), st.integers(-100, 100))
def test_inv_mod_property(q, a):
    from math import gcd

    if gcd(a, q) != 1:
        with pytest.raises(NotCoprime):
            inv_mod(a, q)
    else:
        x = inv_mod(a, q)
        assert 1 <= x < q or q == 1
        assert a * x % q == 1


def test_rank_and_row_echelon_agree():
    rows = [[Fraction(1, 2), 1, 0], [1, 2, 0], [0, 0, Fraction(1, 3)]]
    assert rank(rows) == len(row_echelon(rows)[1]) == 2


def test_nullspace_primitive():
    (n,) = nullspace([[1, 0, 0], [0, 1, 0]], 3)
    assert n in ((0, 0, 1), (0, 0, -1))


def test_solve_integer():
    assert solve_integer([[2, 0], [0, 3]], [4, 9]) == (2, 3)
    assert solve_integer([[2, 0], [0, 3]], [3, 9]) is None


def test_int_inverse_matches_small_unimodular():
    for m in small_unimodular(3):
        inv = int_inverse(m)
        assert matmul(m, inv) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_unimodular_map_algebra():
    a = UnimodularMap(((1, 1, 0), (0, 1, 0), (0, 0, -1)), (1, 2, 3))
    b = UnimodularMap(((0, 1, 0), (1, 0, 0), (0, 0, 1)), (0, -1, 0))
    x = (Fraction(1, 2), 3, -1)
    assert a.compose(b)(x) == a(b(x))
    assert a.inverse()(a(x)) == tuple(Fraction(c) for c in x)
    assert a.is_unimodular()
    assert not UnimodularMap(a.linear, (Fraction(1, 2), 0, 0)).is_unimodular()
    assert not UnimodularMap(((2, 0, 0), (0, 1, 0), (0, 0, 1)), (0, 0, 0)).is_unimodular()
