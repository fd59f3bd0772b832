"""Empty triangulations of lattice polytopes and their open-face partitions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .exact import NotSaturated, UnimodularMap, complete_to_basis, int_inverse, matvec
from .geometry import (
    CLOSED,
    Point,
    PolytopeV,
    Simplex,
    fmt_points,
    lattice_points,
    placing_triangulation,
    sub,
)


class NotLatticePolytope(ValueError):
    pass


class NotEmpty(ValueError):
    pass


@dataclass(frozen=True)
class EmptyTriangulation:
    cells: tuple[Simplex, ...]
    faces: tuple[Simplex, ...]
    source: PolytopeV

    @property
    def vertices(self) -> set[Point]:
        return {v for c in self.cells for v in c.vertices}


def triangulate_points(pts: Sequence[Point]) -> list[tuple[Point, ...]]:
    """Placing triangulation of a point set in lexicographic order, as vertex tuples."""
    pts = sorted(set(pts))
    return [tuple(pts[i] for i in cell) for cell in placing_triangulation(pts)]


def empty_triangulation(p: PolytopeV) -> EmptyTriangulation:
    if not p.is_lattice():
        raise NotLatticePolytope(f"non-integral vertices in {fmt_points(p.vertices)}")
    pts = sorted(lattice_points(p))
    cells = tuple(Simplex(c) for c in triangulate_points(pts))
    for c in cells:
        if len(lattice_points(c)) != len(c.vertices):
            raise AssertionError(f"placing produced a non-empty cell {fmt_points(c.vertices)}")
    faces = {}
    for c in cells:
        for f in c.faces():
            faces.setdefault(f.key(), Simplex(f.key()))
    ordered = tuple(sorted(faces.values(), key=lambda s: (s.dim, s.key())))
    return EmptyTriangulation(cells, ordered, p)


def open_face_partition(t: EmptyTriangulation) -> list[tuple[Simplex, int]]:
    """Faces of the complex; their relative interiors partition the polytope."""
    return [(f, f.dim) for f in t.faces]


def normalize_low_dim_empty(s: Simplex) -> UnimodularMap:
    """Unimodular map sending an empty simplex of dimension <= 2 onto conv(0, e_1, ..., e_i).

    Vertex ``j`` of ``s`` goes to ``e_j`` (vertex 0 to the origin).
    """
    if any(c.denominator != 1 for v in s.vertices for c in v):
        raise NotEmpty("simplex vertices are not integral")
    if s.dim > 2:
        raise ValueError("only simplices of dimension at most 2 are unimodular when empty")
    if len(lattice_points(s, 1, CLOSED)) != len(s.vertices):
        raise NotEmpty(f"{fmt_points(s.vertices)} contains extra lattice points")
    v0 = tuple(int(c) for c in s.vertices[0])
    edges = [tuple(int(c) for c in sub(v, v0)) for v in s.vertices[1:]]
    try:
        w = complete_to_basis(edges, len(v0))
    except NotSaturated as exc:  # pragma: no cover - empty low-dim simplices are unimodular
        raise NotEmpty(str(exc)) from exc
    inv = int_inverse(w)
    return UnimodularMap(inv, tuple(-x for x in matvec(inv, v0)))
