"""Exact polytope and simplex primitives in dimension at most three."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import combinations
from math import ceil, factorial, floor, gcd, lcm
from typing import Iterable, Sequence, Union

from .exact import (
    det,
    nullspace,
    primitive,
    rank,
    row_echelon,
    solve_integer,
)

Point = tuple[Fraction, ...]

CLOSED = "closed"
RELINT = "relint"


class DegenerateInput(ValueError):
    pass


class NotFullDim(ValueError):
    pass


def point(coords: Iterable) -> Point:
    return tuple(c if type(c) is Fraction else Fraction(c) for c in coords)


def fmt_points(pts: Iterable[Sequence]) -> str:
    """Readable rendering of a point list, rationals as a/b."""
    return "[" + ", ".join("(" + ", ".join(str(c) for c in v) + ")" for v in pts) + "]"


def sub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def add(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def scale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def centroid(pts: Sequence[Point]) -> Point:
    n = len(pts)
    return tuple(sum(c) / n for c in zip(*pts))


def affine_rank(pts: Sequence[Sequence]) -> int:
    if not pts:
        return -1
    return rank([sub(p, pts[0]) for p in pts[1:]]) if len(pts) > 1 else 0


@dataclass(frozen=True)
class Simplex:
    vertices: tuple[Point, ...]

    def __post_init__(self):
        verts = tuple(point(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if affine_rank(verts) != len(verts) - 1:
            raise DegenerateInput(f"vertices {fmt_points(verts)} are affinely dependent")

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    def key(self) -> tuple[Point, ...]:
        return tuple(sorted(self.vertices))

    def faces(self, k: int | None = None) -> list["Simplex"]:
        """Faces of dimension k (all nonempty faces when k is None)."""
        dims = range(self.dim + 1) if k is None else [k]
        return [Simplex(c) for i in dims for c in combinations(self.vertices, i + 1)]

    def dilate(self, k) -> "Simplex":
        return Simplex(tuple(scale(k, v) for v in self.vertices))


@dataclass(frozen=True)
class PolytopeV:
    """Convex hull of finitely many rational points, stored by its vertices."""

    vertices: tuple[Point, ...]

    def __post_init__(self):
        pts = tuple(sorted(set(point(v) for v in self.vertices)))
        if not pts:
            raise DegenerateInput("empty point set")
        object.__setattr__(self, "vertices", hull_vertices(pts))

    @property
    def dim(self) -> int:
        return affine_rank(self.vertices)

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    def dilate(self, k) -> "PolytopeV":
        return PolytopeV(tuple(scale(k, v) for v in self.vertices))

    def is_lattice(self) -> bool:
        return all(c.denominator == 1 for v in self.vertices for c in v)


Body = Union[Simplex, PolytopeV]


@dataclass(frozen=True)
class FacetSystem:
    """``{x : n.x == c for equations, n.x <= c for inequalities}`` with integer data."""

    equations: tuple[tuple[tuple[int, ...], int], ...]
    inequalities: tuple[tuple[tuple[int, ...], int], ...]
    dim: int
    ambient_dim: int

    def contains(self, x: Sequence, mode: str = CLOSED) -> bool:
        if any(dot(n, x) != c for n, c in self.equations):
            return False
        if mode == RELINT:
            return all(dot(n, x) < c for n, c in self.inequalities)
        return all(dot(n, x) <= c for n, c in self.inequalities)


def _clear(normal: Sequence, anchor: Sequence) -> tuple[tuple[int, ...], int]:
    n = primitive(normal)
    c = Fraction(dot(n, anchor))
    return tuple(x * c.denominator for x in n), c.numerator


def _span_data(pts: Sequence[Point]):
    """Equations of the affine span and a set of coordinates projecting it injectively."""
    d = len(pts[0])
    edges = [sub(p, pts[0]) for p in pts[1:]]
    eqs = [_clear(n, pts[0]) for n in nullspace(edges, d)] if edges else [
        _clear(tuple(int(i == j) for j in range(d)), pts[0]) for i in range(d)
    ]
    _, pivots = row_echelon(edges) if edges else ([], [])
    return eqs, pivots


def _projected_facets(pts: Sequence[Point], coords: list[int]):
    """Facet inequalities of conv(pts) computed after projecting onto ``coords``."""
    r = len(coords)
    d = len(pts[0])
    proj = [tuple(p[c] for c in coords) for p in pts]
    found = {}
    for subset in combinations(range(len(pts)), r):
        base = [proj[i] for i in subset]
        if r > 1 and rank([sub(b, base[0]) for b in base[1:]]) != r - 1:
            continue
        ns = nullspace([sub(b, base[0]) for b in base[1:]], r) if r > 1 else [(1,)]
        if len(ns) != 1:
            continue
        nrm = ns[0]
        c0 = dot(nrm, base[0])
        vals = [dot(nrm, q) for q in proj]
        if all(v <= c0 for v in vals):
            sign = 1
        elif all(v >= c0 for v in vals):
            sign = -1
        else:
            continue
        full = [0] * d
        for c, x in zip(coords, nrm):
            full[c] = sign * x
        facet = _clear(full, pts[subset[0]])
        found[facet] = subset
    return found


def hull_vertices(pts: Sequence[Point]) -> tuple[Point, ...]:
    r = affine_rank(pts)
    if r <= 0:
        return tuple(pts[:1])
    _, coords = _span_data(pts)
    facets = _projected_facets(pts, coords)
    out = []
    for p in pts:
        tight = [n for n, c in facets if dot(n, p) == c]
        if tight and rank([[n[j] for j in coords] for n in tight]) == r:
            out.append(p)
    return tuple(out)


def _cofactor_normal(rows: Sequence[Sequence[int]], r: int) -> tuple[int, ...]:
    """Integer vector orthogonal to the r - 1 given vectors in Z^r (generalized cross product)."""
    if r == 1:
        return (1,)
    return tuple((-1) ** k * det([[row[j] for j in range(r) if j != k] for row in rows])
                 for k in range(r))


def _simplex_facets(pts: Sequence[Point], coords: list[int]):
    """Facets of a simplex, one per vertex, from cofactors of the projected integer points."""
    r, d = len(coords), len(pts[0])
    den = lcm(*(pt[c].denominator for pt in pts for c in coords))
    proj = [tuple(int(pt[c] * den) for c in coords) for pt in pts]
    found = {}
    for i in range(len(pts)):
        others = [j for j in range(len(pts)) if j != i]
        base = proj[others[0]]
        nrm = _cofactor_normal([tuple(a - b for a, b in zip(proj[j], base)) for j in others[1:]], r)
        if dot(nrm, proj[i]) > dot(nrm, base):
            nrm = tuple(-x for x in nrm)
        full = [0] * d
        for c, x in zip(coords, nrm):
            full[c] = x
        found[_clear(full, pts[others[0]])] = tuple(others)
    return found


@lru_cache(maxsize=1 << 16)
def _facet_system_of(pts: tuple[Point, ...]) -> FacetSystem:
    r = affine_rank(pts)
    eqs, coords = _span_data(pts)
    if r == 0:
        ineqs = ()
    elif len(set(pts)) == r + 1:
        ineqs = tuple(sorted(_simplex_facets(pts, coords)))
    else:
        ineqs = tuple(sorted(_projected_facets(pts, coords)))
    return FacetSystem(tuple(eqs), ineqs, r, len(pts[0]))


def facet_system(body: Body | Sequence[Sequence], claimed_dim: int | None = None) -> FacetSystem:
    """Exact H-description of the closed body inside its affine span."""
    if isinstance(body, (Simplex, PolytopeV)):
        pts = tuple(body.vertices)
        if claimed_dim is None:
            claimed_dim = body.dim
    else:
        pts = tuple(point(v) for v in body)
    fs = _facet_system_of(pts)
    if claimed_dim is not None and claimed_dim != fs.dim:
        raise DegenerateInput(f"claimed dimension {claimed_dim} but affine rank is {fs.dim}")
    return fs


def contains(body: Body | FacetSystem, x: Sequence, mode: str = CLOSED) -> bool:
    fs = body if isinstance(body, FacetSystem) else facet_system(body)
    return fs.contains(point(x), mode)


def volume(s: Simplex) -> Fraction:
    d = s.ambient_dim
    if s.dim != d:
        raise NotFullDim(f"{s.dim}-simplex in R^{d} has no {d}-volume")
    v0 = s.vertices[0]
    return abs(Fraction(det([sub(v, v0) for v in s.vertices[1:]]))) / factorial(d)


def polytope_volume(p: PolytopeV) -> Fraction:
    """d-volume of a polytope (zero when it is not full-dimensional)."""
    d = p.ambient_dim
    if p.dim != d:
        return Fraction(0)
    verts = p.vertices
    return sum((volume(Simplex([verts[i] for i in cell])) for cell in placing_triangulation(verts)),
               Fraction(0))


def _pivot_coords(pts: Sequence[Point], idx: Sequence[int]) -> list[int]:
    base = pts[idx[0]]
    edges = [sub(pts[i], base) for i in idx[1:]]
    return row_echelon(edges)[1] if edges else []


def _orient(pts: Sequence[Point], face: Sequence[int], x: Point, coords: list[int]) -> int:
    base = pts[face[0]]
    rows = [[pts[i][c] - base[c] for c in coords] for i in face[1:]]
    rows.append([x[c] - base[c] for c in coords])
    v = det(rows)
    return (v > 0) - (v < 0)


def placing_triangulation(pts: Sequence[Point]) -> list[tuple[int, ...]]:
    """Placing triangulation of distinct points, inserted in the given order.

    Each cell is a tuple of indices into ``pts``.  With lexicographic order
    every inserted point is a vertex of the hull so far, so all points become
    vertices.  Visibility is strict, so no flat cells are ever created.
    """
    if not pts:
        return []
    cells: list[tuple[int, ...]] = [(0,)]
    basis = [0]
    coords: list[int] = []
    for idx in range(1, len(pts)):
        x = pts[idx]
        if rank([sub(pts[b], pts[0]) for b in basis[1:]] + [sub(x, pts[0])]) == len(basis):
            # leaves the current affine span: cone everything
            cells = [c + (idx,) for c in cells]
            basis.append(idx)
            coords = _pivot_coords(pts, basis)
            continue
        seen: dict[tuple[int, ...], list[int]] = {}
        for c in cells:
            for o in c:
                f = tuple(v for v in c if v != o)
                seen.setdefault(f, []).append(o)
        new = []
        for f, opp in seen.items():
            if len(opp) != 1:
                continue
            sx = _orient(pts, f, x, coords)
            if sx != 0 and sx == -_orient(pts, f, pts[opp[0]], coords):
                new.append(f + (idx,))
        if not new:
            raise DegenerateInput(f"point {x} is not beyond the current hull; insert in lex order")
        cells.extend(new)
    return [tuple(sorted(c)) for c in cells]


def _box(pts: Sequence[Point], s: int) -> list[tuple[int, int]]:
    return [(ceil(min(p[i] for p in pts) * s), floor(max(p[i] for p in pts) * s))
            for i in range(len(pts[0]))]


def scaled_points(fs: FacetSystem, verts: Sequence[Point], s: int, mode: str = CLOSED):
    """Integer vectors z with z/s in the body; the last coordinate is solved, not scanned."""
    if mode == RELINT and fs.dim == 0:
        mode = CLOSED
    strict = mode == RELINT
    box = _box(verts, s)
    d = len(box)
    eqs = [(n, c * s) for n, c in fs.equations]
    ineqs = [(n, c * s) for n, c in fs.inequalities]
    out = []

    def last(prefix: list[int]):
        lo, hi = box[-1]
        for n, c in eqs:
            r = c - sum(a * z for a, z in zip(n, prefix))
            a = n[-1]
            if a == 0:
                if r != 0:
                    return
            else:
                q, rem = divmod(r, a)
                if rem:
                    return
                lo, hi = max(lo, q), min(hi, q)
        for n, c in ineqs:
            r = c - sum(a * z for a, z in zip(n, prefix))
            a = n[-1]
            if a == 0:
                if r < 0 or (strict and r == 0):
                    return
            elif a > 0:
                # a z <= r  (or < r)
                bound = -((-r) // a) - 1 if strict else r // a
                hi = min(hi, bound)
            else:
                # a < 0:  z >= r / a  (or >)
                bound = (-r) // (-a) + 1 if strict else -(r // -a)
                lo = max(lo, bound)
            if lo > hi:
                return
        for z in range(lo, hi + 1):
            out.append(tuple(prefix) + (z,))

    # integer copies of the first two coordinates of s * verts, over a common denominator
    den = lcm(*((c * s).denominator for v in verts for c in v[:2])) if d == 3 else 1
    plane = [(int(v[0] * s * den), int(v[1] * s * den)) for v in verts] if d == 3 else []
    segments = [(u, v) for i, u in enumerate(plane) for v in plane[i + 1:] if u[0] != v[0]]

    def slice_range(c: int) -> tuple[int, int]:
        # the slice x_0 = c of a hull is the hull of the slices of all vertex-pair segments
        cc = c * den
        lo, hi = box[1][1] + 1, box[1][0] - 1
        for x, y in plane:
            if x == cc:
                lo, hi = min(lo, -((-y) // den)), max(hi, y // den)
        for (x0, y0), (x1, y1) in segments:
            if (x0 - cc) * (x1 - cc) < 0:
                num, dd = y0 * (x1 - cc) + y1 * (cc - x0), (x1 - x0) * den
                if dd < 0:
                    num, dd = -num, -dd
                lo, hi = min(lo, -((-num) // dd)), max(hi, num // dd)
        return max(box[1][0], lo), min(box[1][1], hi)

    def rec(prefix: list[int]):
        if len(prefix) == d - 1:
            last(prefix)
            return
        if d == 3 and len(prefix) == 1:
            lo, hi = slice_range(prefix[0])
        else:
            lo, hi = box[len(prefix)]
        for z in range(lo, hi + 1):
            prefix.append(z)
            rec(prefix)
            prefix.pop()

    rec([])
    return out


def lattice_points(body: Body, s: int = 1, mode: str = CLOSED) -> list[Point]:
    """Points of (1/s) Z^d in the closed body or its relative interior."""
    fs = facet_system(body)
    return [tuple(Fraction(z, s) for z in zs) for zs in scaled_points(fs, body.vertices, s, mode)]


def count_scaled(body: Body, s: int, mode: str = CLOSED, fs: FacetSystem | None = None) -> int:
    fs = fs or facet_system(body)
    return len(scaled_points(fs, body.vertices, s, mode))


def affine_span_has_lattice_point(body: Body) -> bool:
    fs = facet_system(body)
    if not fs.equations:
        return True
    rows = [n for n, _ in fs.equations]
    rhs = [c for _, c in fs.equations]
    return solve_integer(rows, rhs) is not None


def _relint_range(fn: Sequence, pts: Sequence) -> tuple:
    """Values of a functional on the relative interior: (v, v) for a constant, else the open (lo, hi)."""
    vals = [dot(fn, p) for p in pts]
    return min(vals), max(vals)


def _ranges_disjoint(ra: tuple, rb: tuple) -> bool:
    (la, ha), (lb, hb) = ra, rb
    if la == ha and lb == hb:
        return la != lb
    if la == ha:
        return la <= lb or la >= hb
    if lb == hb:
        return lb <= la or lb >= ha
    return ha <= lb or hb <= la


def _cross3(u: Sequence, v: Sequence) -> tuple:
    return (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])


def _axes(fa: FacetSystem, fb: FacetSystem, va: Sequence, vb: Sequence):
    for n, _ in fa.equations + fa.inequalities + fb.equations + fb.inequalities:
        yield n
    if len(va[0]) == 3:
        ea = [sub(x, y) for x, y in combinations(va, 2)]
        eb = [sub(x, y) for x, y in combinations(vb, 2)]
        for u in ea:
            for v in eb:
                yield _cross3(u, v)


def separated(fa: FacetSystem, fb: FacetSystem, va: Sequence, vb: Sequence) -> bool:
    """Sound quick test: a functional whose relint ranges on A and B do not meet."""
    for n in _axes(fa, fb, va, vb):
        if any(n) and _ranges_disjoint(_relint_range(n, va), _relint_range(n, vb)):
            return True
    return False


def relint_feasible(eqs: Sequence, stricts: Sequence, d: int) -> bool:
    """Is {n.x == c} and {n.x < c} feasible over Q^d?  Fourier-Motzkin with strictness.

    Rows are kept integral (and divided by their content) throughout.
    """
    def norm(a: list[int], c: int) -> tuple[list[int], int]:
        g = 0
        for x in a:
            g = gcd(g, x)
        g = gcd(g, c)
        return ([x // g for x in a], c // g) if g > 1 else (a, c)

    eq = [norm([int(x) for x in n], int(c)) for n, c in eqs]
    cons = [norm([int(x) for x in n], int(c)) + (True,) for n, c in stricts]
    # eliminate equations: pick a pivot, substitute into everything else
    while eq:
        a, c = eq.pop()
        piv = next((k for k in range(d) if a[k]), None)
        if piv is None:
            if c != 0:
                return False
            continue
        ap = a[piv]
        sgn = 1 if ap > 0 else -1

        def elim(b: list[int], cb: int) -> tuple[list[int], int]:
            f = b[piv]
            if not f:
                return b, cb
            # |ap| * row_b - sgn * f * row_a keeps the inequality direction
            nb = [abs(ap) * x - sgn * f * y for x, y in zip(b, a)]
            return norm(nb, abs(ap) * cb - sgn * f * c)

        eq = [elim(b, cb) for b, cb in eq]
        cons = [elim(b, cb) + (st,) for b, cb, st in cons]
    for v in range(d):
        pos, neg, zero = [], [], []
        for a, c, st in cons:
            (pos if a[v] > 0 else neg if a[v] < 0 else zero).append((a, c, st))
        if not pos or not neg:
            cons = zero
            continue
        combined = list(zero)
        for ap, cp, sp in pos:
            for an, cn, sn in neg:
                fp, fn = -an[v], ap[v]
                row, rhs = norm([fp * x + fn * y for x, y in zip(ap, an)], fp * cp + fn * cn)
                combined.append((row, rhs, sp or sn))
        cons = list({(tuple(a), c, st): None for a, c, st in combined})
        cons = [(list(a), c, st) for a, c, st in cons]
    return all((c > 0) if st else (c >= 0) for _, c, st in cons)


def _boxes_apart(a: Sequence[Point], b: Sequence[Point]) -> bool:
    for i in range(len(a[0])):
        if max(p[i] for p in a) < min(p[i] for p in b) or max(p[i] for p in b) < min(p[i] for p in a):
            return True
    return False


def pieces_disjoint(a: Body, b: Body, fa: FacetSystem | None = None,
                    fb: FacetSystem | None = None) -> bool:
    """True iff the relative interiors of ``a`` and ``b`` do not meet."""
    va = a.vertices if isinstance(a, (Simplex, PolytopeV)) else a
    vb = b.vertices if isinstance(b, (Simplex, PolytopeV)) else b
    if _boxes_apart(va, vb):
        return True
    fa = fa or facet_system(a)
    fb = fb or facet_system(b)
    if separated(fa, fb, va, vb):
        return True
    eqs = list(fa.equations) + list(fb.equations)
    stricts = list(fa.inequalities) + list(fb.inequalities)
    return not relint_feasible(eqs, stricts, fa.ambient_dim)


def _sign_normal(n: Sequence[int]) -> tuple[int, ...]:
    n = primitive(n)
    first = next((x for x in n if x), 0)
    return n if first >= 0 else tuple(-x for x in n)


def pairwise_disjoint(bodies: Sequence[Body], n_axes: int = 32) -> list[tuple[int, int]]:
    """Index pairs whose relative interiors overlap (empty list means a disjoint family).

    Coordinates are scaled by a common denominator so everything runs on
    integers.  Every body's range on the family's most frequent facet
    directions is tabulated once; pairs separated there are skipped before
    the per-pair axis search and the exact Fourier-Motzkin test.
    """
    if not bodies:
        return []
    den = lcm(*(c.denominator for b in bodies for v in b.vertices for c in v))
    verts = [tuple(tuple(int(c * den) for c in v) for v in b.vertices) for b in bodies]
    systems = [facet_system(v) for v in verts]
    d = len(verts[0][0])
    freq = Counter(_sign_normal(n) for fs in systems for n, _ in fs.equations + fs.inequalities)
    axes = [tuple(int(i == j) for j in range(d)) for i in range(d)]
    axes += [n for n, _ in freq.most_common(n_axes) if n not in axes]
    table = [[_relint_range(n, v) for n in axes] for v in verts]
    order = sorted(range(len(bodies)), key=lambda i: table[i][0][0])
    bad = []
    for pos, i in enumerate(order):
        ti = table[i]
        hi = ti[0][1]
        for j in order[pos + 1:]:
            tj = table[j]
            if tj[0][0] > hi:
                break
            if any(_ranges_disjoint(a, b) for a, b in zip(ti, tj)):
                continue
            fa, fb = systems[i], systems[j]
            if separated(fa, fb, verts[i], verts[j]):
                continue
            eqs = list(fa.equations) + list(fb.equations)
            if relint_feasible(eqs, list(fa.inequalities) + list(fb.inequalities), d):
                bad.append((min(i, j), max(i, j)))
    return sorted(bad)
