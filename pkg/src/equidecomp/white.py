"""White normal form T(p, q) of empty lattice tetrahedra."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd

from .exact import (
    NotCoprime,
    UnimodularMap,
    as_matrix,
    complete_to_basis,
    int_inverse,
    inv_mod,
    solve,
    transpose,
)
from .geometry import Simplex, fmt_points, lattice_points, sub, volume
from .triangulation import NotEmpty


class NoWidthOne(RuntimeError):
    pass


def white_vertices(p: int, q: int) -> tuple[tuple[int, int, int], ...]:
    return ((0, 0, 0), (1, 0, 0), (0, 0, 1), (p, q, 1))


def white_tetrahedron(p: int, q: int) -> Simplex:
    return Simplex(white_vertices(p, q))


@dataclass(frozen=True)
class WhiteForm:
    p: int
    q: int
    map: UnimodularMap
    p_canonical: int


def _check_empty(t: Simplex) -> None:
    if t.dim != 3 or t.ambient_dim != 3:
        raise ValueError("expected a tetrahedron in R^3")
    if any(c.denominator != 1 for v in t.vertices for c in v):
        raise NotEmpty("vertices are not integral")
    if len(lattice_points(t)) != 4:
        raise NotEmpty(f"{fmt_points(t.vertices)} has lattice points besides its vertices")


def width_one_direction(t: Simplex) -> tuple[int, int, int]:
    """Primitive functional taking two consecutive values, on two vertices each."""
    _check_empty(t)
    v0 = t.vertices[0]
    edges = [sub(v, v0) for v in t.vertices[1:]]
    found = set()
    for signs in product((-1, 0, 1), repeat=3):
        vals = (0,) + signs
        if sorted(vals) not in ([0, 0, 1, 1], [-1, -1, 0, 0]):
            continue
        w = solve(edges, signs)
        if any(x.denominator != 1 for x in w):
            continue
        w = tuple(int(x) for x in w)
        first = next(x for x in w if x)
        found.add(w if first > 0 else tuple(-x for x in w))
    if not found:
        raise NoWidthOne(f"no width-one functional for {fmt_points(t.vertices)}")
    return min(found)


def canonical_p(p: int, q: int) -> int:
    if q == 1:
        return 0
    if gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) != 1")
    inv = inv_mod(p, q)
    return min(p % q, -p % q, inv, -inv % q)


def white_normal_form(t: Simplex) -> WhiteForm:
    w = width_one_direction(t)
    verts = [tuple(int(c) for c in v) for v in t.vertices]

    # rows c2, c3, w: the third coordinate becomes w.x
    m = complete_to_basis([w])
    basis_rows = transpose(m)
    a = as_matrix([basis_rows[1], basis_rows[2], basis_rows[0]])
    ys = [tuple(sum(r * x for r, x in zip(row, v)) for row in a) for v in verts]

    # the level holding the lexicographically smallest image vertex becomes z = 0
    anchor = min(range(4), key=lambda i: ys[i])
    if ys[anchor][2] != min(y[2] for y in ys):
        a = as_matrix([a[0], a[1], [-x for x in a[2]]])
    current = UnimodularMap(a, (0, 0, 0))
    current = UnimodularMap.translation_by([-c for c in current(verts[anchor])]).compose(current)

    ys = current.apply_all(verts)
    other = next(y for i, y in enumerate(ys) if i != anchor and y[2] == 0)
    b2 = int_inverse(complete_to_basis([other[:2]]))
    planar = ((b2[0][0], b2[0][1], 0), (b2[1][0], b2[1][1], 0), (0, 0, 1))
    current = UnimodularMap(planar, (0, 0, 0)).compose(current)

    top = sorted(y for y in current.apply_all(verts) if y[2] == 1)
    x0, y0, _ = top[0]
    shear = ((1, 0, -x0), (0, 1, -y0), (0, 0, 1))
    current = UnimodularMap(shear, (0, 0, 0)).compose(current)

    top = [y for y in current.apply_all(verts) if y[2] == 1 and y != (0, 0, 1)]
    pt, qt, _ = top[0]
    if qt < 0:
        current = UnimodularMap(((1, 0, 0), (0, -1, 0), (0, 0, 1)), (0, 0, 0)).compose(current)
        qt = -qt
    q = qt
    p = pt % q if q > 1 else 0
    shift = (p - pt) // q
    current = UnimodularMap(((1, shift, 0), (0, 1, 0), (0, 0, 1)), (0, 0, 0)).compose(current)

    image = set(current.apply_all(verts))
    if image != set(white_vertices(p, q)):
        raise AssertionError(f"white normal form failed: {image} vs T({p},{q})")
    if Fraction(q, 6) != volume(t):
        raise AssertionError("q does not match 6 * volume")
    return WhiteForm(p, q, current, canonical_p(p, q))
