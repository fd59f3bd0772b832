"""Decomposition of lattice 3-polytopes into relatively open half-unimodular simplices.

Empty tetrahedra are handled in White normal form T(p, q): the slab
``0 <= z <= 1/2`` (T-) and ``1/2 <= z <= 1`` (T+) are triangulated along the
monotone paths ``a`` and ``b`` through the half-integer points of the middle
parallelogram.  Lower-dimensional empty faces use fixed templates.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import ceil, gcd
from typing import Sequence

from .ehrhart import QuasiPolynomial, SimplexType, closed_form, fit_quasipolynomial
from .exact import (
    NotCoprime,
    NotSaturated,
    UnimodularMap,
    complete_to_basis,
    int_inverse,
    inv_mod,
    matmul,
    matvec,
    small_unimodular,
)
from .geometry import (
    CLOSED,
    Point,
    PolytopeV,
    RELINT,
    Simplex,
    affine_span_has_lattice_point,
    centroid,
    facet_system,
    fmt_points,
    lattice_points,
    pairwise_disjoint,
    point,
    polytope_volume,
    scaled_points,
    volume,
)
from .triangulation import NotLatticePolytope, empty_triangulation, normalize_low_dim_empty
from .white import white_normal_form


class NotHalfUnimodular(ValueError):
    pass


class NoMapFound(RuntimeError):
    pass


class DegeneratePolygon(ValueError):
    pass


def _half(*coords) -> Point:
    return tuple(Fraction(c, 2) for c in coords)


@dataclass(frozen=True)
class FundamentalPoints:
    a: tuple[Point, ...]
    b: tuple[Point, ...]
    p_prime: int


def _check_pq(p: int, q: int) -> None:
    if q < 1 or not 0 <= p < q:
        raise ValueError(f"need 0 <= p < q, got ({p}, {q})")
    if gcd(p, q) != 1:
        raise NotCoprime(f"gcd({p}, {q}) != 1")


def fundamental_points(p: int, q: int) -> FundamentalPoints:
    _check_pq(p, q)
    start, end = _half(0, 0, 1), _half(p + 1, q, 1)
    a = [start] + [_half(ceil(Fraction(i * p, q)), i, 1) for i in range(1, q)] + [end]
    if q == 1:
        return FundamentalPoints(tuple(a), tuple(a), 0)
    pp = inv_mod(-p, q)
    b = [start]
    for j in range(1, q):
        m = j * pp % q
        b.append(_half(Fraction(j + m * p, q), m, 1))
    b.append(end)
    return FundamentalPoints(tuple(a), tuple(b), pp)


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _in_closed_triangle(x, a, b, c) -> bool:
    d1, d2, d3 = _cross(a, b, x), _cross(b, c, x), _cross(c, a, x)
    return d1 >= 0 and d2 >= 0 and d3 >= 0


def triangulate_monotone_region(polygon: Sequence[Point]) -> list[tuple[Point, Point, Point]]:
    """Ear-clipping triangulation of a simple polygon lying in a plane z = const.

    Ears are taken in cycle order starting from the first vertex; straight
    angles are never clipped, so every triangle has positive area.
    """
    poly = [point(v) for v in polygon]
    if len(poly) < 3 or len({v[2] for v in poly}) != 1:
        raise DegeneratePolygon("need at least three coplanar vertices on a level plane")
    area2 = sum(_cross((0, 0), poly[i], poly[(i + 1) % len(poly)]) for i in range(len(poly)))
    if area2 == 0:
        raise DegeneratePolygon("polygon has zero area")
    if area2 < 0:
        poly.reverse()
    out = []
    while len(poly) > 3:
        n = len(poly)
        for i in range(n):
            a, b, c = poly[i - 1], poly[i], poly[(i + 1) % n]
            if _cross(a, b, c) <= 0:
                continue
            others = (poly[j] for j in range(n) if j not in (i - 1 if i else n - 1, i, (i + 1) % n))
            if any(_in_closed_triangle(x, a, b, c) for x in others):
                continue
            out.append((a, b, c))
            del poly[i]
            break
        else:
            raise DegeneratePolygon("no ear found; polygon is not simple")
    if _cross(*poly) == 0:
        raise DegeneratePolygon("final triangle is flat")
    out.append(tuple(poly))
    return out


def _tetra(*pts) -> Simplex:
    return Simplex(tuple(point(v) for v in pts))


def decompose_T_minus(p: int, q: int) -> list[Simplex]:
    """4q half-unimodular tetrahedra triangulating the lower half of T(p, q)."""
    fp = fundamental_points(p, q)
    a = fp.a
    C, B = _half(p, q, 1), _half(1, 0, 1)
    O, X, M = point((0, 0, 0)), point((1, 0, 0)), _half(1, 0, 0)
    left = triangulate_monotone_region(list(a) + [C])
    right = triangulate_monotone_region(list(a) + [B])
    cells = [_tetra(O, *t) for t in left] + [_tetra(X, *t) for t in right]
    for i in range(1, q + 1):
        cells.append(_tetra(O, M, a[i - 1], a[i]))
        cells.append(_tetra(M, X, a[i - 1], a[i]))
    return cells


def decompose_T_plus(p: int, q: int) -> list[Simplex]:
    """4q half-unimodular tetrahedra triangulating the upper half of T(p, q)."""
    fp = fundamental_points(p, q)
    b = fp.b
    C, B = _half(p, q, 1), _half(1, 0, 1)
    Z0, Z1, M = point((0, 0, 1)), point((p, q, 1)), _half(p, q, 2)
    down = triangulate_monotone_region(list(b) + [B])
    up = triangulate_monotone_region(list(b) + [C])
    cells = [_tetra(Z0, *t) for t in down] + [_tetra(Z1, *t) for t in up]
    for j in range(1, q + 1):
        cells.append(_tetra(Z0, M, b[j - 1], b[j]))
        cells.append(_tetra(M, Z1, b[j - 1], b[j]))
    return cells


def _doubled(s: Simplex) -> list[tuple[int, ...]]:
    out = []
    for v in s.vertices:
        w = tuple(2 * c for c in v)
        if any(c.denominator != 1 for c in w):
            raise NotHalfUnimodular(f"{fmt_points(s.vertices)} is not in (1/2)Z^3")
        out.append(tuple(int(c) for c in w))
    return out


def is_half_unimodular(s: Simplex) -> bool:
    try:
        u = _doubled(s)
        complete_to_basis([tuple(x - y for x, y in zip(v, u[0])) for v in u[1:]], len(u[0]))
    except (NotHalfUnimodular, NotSaturated):
        return False
    return True


def classify(s: Simplex) -> SimplexType:
    if s.ambient_dim != 3 or not is_half_unimodular(s):
        raise NotHalfUnimodular(f"{fmt_points(s.vertices)} is not a half-unimodular simplex in R^3")
    i = s.dim
    inside = len(lattice_points(s))
    if inside > 1:
        raise AssertionError("a half-unimodular simplex holds at most one lattice point")
    if inside == 1:
        return SimplexType(f"Delta_{i}^1")
    if not affine_span_has_lattice_point(s):
        return SimplexType(f"Delta_{i}^0")
    return SimplexType(f"Delta'_{i}")


@lru_cache(maxsize=None)
def _block_candidates(i: int) -> tuple:
    """Integer matrices [[I_i, X], [0, G]] covering every class mod 2."""
    n = 3 - i
    out = []
    for g in small_unimodular(n) if n else [()]:
        for bits in range(1 << (i * n)):
            m = [[0] * 3 for _ in range(3)]
            for r in range(i):
                m[r][r] = 1
                for c in range(n):
                    m[r][i + c] = (bits >> (r * n + c)) & 1
            for r in range(n):
                for c in range(n):
                    m[i + r][i + c] = g[r][c]
            out.append(tuple(tuple(row) for row in m))
    return tuple(out)


def canonical_map(s: Simplex, t: SimplexType | None = None) -> UnimodularMap:
    """A unimodular map sending ``s`` onto the canonical representative of its type."""
    t = t or classify(s)
    target = t.canonical_vertices
    if len(target) != len(s.vertices):
        raise NoMapFound(f"dimension mismatch between {fmt_points(s.vertices)} and {t.value}")
    tgt2 = [tuple(int(2 * c) for c in v) for v in target]
    f_edges = [tuple(x - y for x, y in zip(v, tgt2[0])) for v in tgt2[1:]]
    wf = complete_to_basis(f_edges, 3)
    goal = set(target)
    for perm in permutations(_doubled(s)):
        e_edges = [tuple(x - y for x, y in zip(v, perm[0])) for v in perm[1:]]
        try:
            we_inv = int_inverse(complete_to_basis(e_edges, 3))
        except NotSaturated:
            raise NotHalfUnimodular(f"{fmt_points(s.vertices)} is not half-unimodular") from None
        for g in _block_candidates(len(e_edges)):
            w = matmul(matmul(wf, g), we_inv)
            t2 = [c - x for c, x in zip(tgt2[0], matvec(w, perm[0]))]
            if any(x % 2 for x in t2):
                continue
            cand = UnimodularMap(tuple(tuple(r) for r in w), tuple(x // 2 for x in t2))
            if set(cand.apply_all(s.vertices)) == goal:
                return cand
    raise NoMapFound(f"no unimodular map from {fmt_points(s.vertices)} to {t.value}")


@dataclass(frozen=True)
class OpenSimplexPiece:
    simplex: Simplex
    type: SimplexType
    to_canonical: UnimodularMap

    def check(self) -> bool:
        return (
            is_half_unimodular(self.simplex)
            and classify(self.simplex) == self.type
            and self.to_canonical.is_unimodular()
            and set(self.to_canonical.apply_all(self.simplex.vertices))
            == set(self.type.canonical_vertices)
        )


def _piece(s: Simplex) -> OpenSimplexPiece:
    t = classify(s)
    return OpenSimplexPiece(s, t, canonical_map(s, t))


@lru_cache(maxsize=None)
def _template(i: int) -> tuple[OpenSimplexPiece, ...]:
    o, e1, e2 = (point(v) for v in ((0, 0, 0), (1, 0, 0), (0, 1, 0)))
    m1, m2, m12 = _half(1, 0, 0), _half(0, 1, 0), _half(1, 1, 0)
    if i == 0:
        simplices = [(o,)]
    elif i == 1:
        simplices = [(o, m1), (m1,), (m1, e1)]
    elif i == 2:
        simplices = [
            (e1, m1, m12), (e2, m2, m12), (o, m1, m12), (o, m12, m2),
            (o, m12), (m1, m12), (m2, m12),
        ]
    else:
        raise ValueError("templates exist for dimensions 0, 1 and 2")
    return tuple(_piece(Simplex(s)) for s in simplices)


def open_template(i: int) -> list[tuple[Simplex, SimplexType]]:
    """Half-unimodular pieces partitioning the open standard i-simplex, i <= 2."""
    return [(pc.simplex, pc.type) for pc in _template(i)]


def _faces_inside(cells: Sequence[Simplex], region: PolytopeV) -> list[Simplex]:
    fs = facet_system(region)
    seen = {}
    for c in cells:
        for f in c.faces():
            key = f.key()
            if key not in seen:
                seen[key] = f
    out = [f for f in seen.values() if fs.contains(centroid(f.vertices), RELINT)]
    return sorted(out, key=lambda s: (s.dim, s.key()))


def half_bodies(p: int, q: int) -> tuple[PolytopeV, PolytopeV, PolytopeV]:
    """T-, T+ and the middle parallelogram of T(p, q)."""
    A, B, C, D = _half(0, 0, 1), _half(1, 0, 1), _half(p, q, 1), _half(p + 1, q, 1)
    lower = PolytopeV((point((0, 0, 0)), point((1, 0, 0)), A, B, C, D))
    upper = PolytopeV((point((0, 0, 1)), point((p, q, 1)), A, B, C, D))
    return lower, upper, PolytopeV((A, B, C, D))


@lru_cache(maxsize=None)
def _interior_pieces(p: int, q: int) -> tuple[OpenSimplexPiece, ...]:
    lower, upper, mid = half_bodies(p, q)
    minus, plus = decompose_T_minus(p, q), decompose_T_plus(p, q)
    faces = _faces_inside(minus, lower) + _faces_inside(plus, upper) + _faces_inside(plus, mid)
    return tuple(_piece(f) for f in faces)


def interior_open_decomposition(p: int, q: int) -> list[OpenSimplexPiece]:
    """Open half-unimodular pieces partitioning the interior of T(p, q)."""
    _check_pq(p, q)
    return list(_interior_pieces(p, q))


@dataclass(frozen=True)
class Decomposition:
    pieces: tuple[OpenSimplexPiece, ...]
    source: PolytopeV

    def type_vector(self) -> dict[SimplexType, int]:
        return type_vector(self)

    def ehrhart(self) -> QuasiPolynomial:
        total = QuasiPolynomial.zero()
        for t, n in type_vector(self).items():
            if n:
                total = total + n * closed_form(t)
        return total


def type_vector(decomp: Decomposition | Sequence[OpenSimplexPiece]) -> dict[SimplexType, int]:
    pieces = decomp.pieces if isinstance(decomp, Decomposition) else decomp
    counts = Counter(pc.type for pc in pieces)
    return {t: counts.get(t, 0) for t in SimplexType}


def _pull_back(pieces: Sequence[OpenSimplexPiece], to_model: UnimodularMap) -> list[OpenSimplexPiece]:
    back = to_model.inverse()
    return [
        OpenSimplexPiece(Simplex(back.apply_all(pc.simplex.vertices)), pc.type,
                         pc.to_canonical.compose(to_model))
        for pc in pieces
    ]


def lift_to_3d(p: PolytopeV) -> PolytopeV:
    d = p.ambient_dim
    if d == 3:
        return p
    if d > 3:
        raise ValueError("dimension above three is not supported")
    return PolytopeV(tuple(v + (Fraction(0),) * (3 - d) for v in p.vertices))


def decompose_polytope(p: PolytopeV) -> Decomposition:
    if not p.is_lattice():
        raise NotLatticePolytope(f"non-integral vertices in {fmt_points(p.vertices)}")
    p = lift_to_3d(p)
    tri = empty_triangulation(p)
    pieces: list[OpenSimplexPiece] = []
    for face in tri.faces:
        if face.dim <= 2:
            to_std = normalize_low_dim_empty(face)
            pieces.extend(_pull_back(_template(face.dim), to_std))
        else:
            wf = white_normal_form(face)
            pieces.extend(_pull_back(_interior_pieces(wf.p, wf.q), wf.map))
    return Decomposition(tuple(pieces), p)


def audit_points(pieces: Sequence[Simplex], body: PolytopeV, s: int,
                 mode: str = CLOSED) -> tuple[int, int, int]:
    """(missed, doubly covered, stray) points of (1/s)Z^3 for a claimed partition of ``body``."""
    expected = set(scaled_points(facet_system(body), body.vertices, s, mode))
    seen = Counter()
    for pc in pieces:
        seen.update(scaled_points(facet_system(pc), pc.vertices, s, RELINT))
    missed = sum(1 for x in expected if seen[x] == 0)
    double = sum(1 for x, n in seen.items() if n > 1)
    stray = sum(1 for x in seen if x not in expected)
    return missed, double, stray


def certify_partition(pieces: Sequence[Simplex], body: PolytopeV, mode: str = CLOSED,
                      scales: Sequence[int] = (1, 2, 4), disjointness: bool = True) -> dict[str, bool]:
    """Exact checks that the open pieces partition ``body`` (or its interior)."""
    full = [pc for pc in pieces if pc.dim == 3]
    report = {"volume": sum((volume(pc) for pc in full), Fraction(0)) == polytope_volume(body)}
    for s in scales:
        report[f"points@{s}"] = audit_points(pieces, body, s, mode) == (0, 0, 0)
    if disjointness:
        report["disjoint"] = not pairwise_disjoint(pieces)
    return report


def certify_decomposition(decomp: Decomposition, scales: Sequence[int] = (1, 2, 4),
                          disjointness: bool = True) -> dict[str, bool]:
    simplices = [pc.simplex for pc in decomp.pieces]
    report = certify_partition(simplices, decomp.source, CLOSED, scales, disjointness)
    report["pieces"] = all(pc.check() for pc in decomp.pieces)
    report["ehrhart"] = decomp.ehrhart() == fit_quasipolynomial(decomp.source)
    return report
