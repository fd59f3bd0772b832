"""Equidecomposition certificates between Ehrhart-equivalent lattice 3-polytopes."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .ehrhart import QuasiPolynomial, SimplexType, closed_form, fit_quasipolynomial
from .exact import UnimodularMap
from .geometry import PolytopeV, Simplex, fmt_points, pairwise_disjoint, polytope_volume, volume
from .halfunimodular import (
    NotHalfUnimodular,
    audit_points,
    classify,
    decompose_polytope,
    lift_to_3d,
    type_vector,
)
from .triangulation import NotLatticePolytope


class NotEhrhartEquivalent(ValueError):
    def __init__(self, first: QuasiPolynomial, second: QuasiPolynomial):
        super().__init__(f"Ehrhart quasipolynomials differ: {first} vs {second}")
        self.first = first
        self.second = second


@dataclass(frozen=True)
class CertificatePair:
    piece: Simplex
    map: UnimodularMap
    image: Simplex
    type: SimplexType


@dataclass(frozen=True)
class EquidecompCertificate:
    pairs: tuple[CertificatePair, ...]
    type_vector: dict = field(hash=False, compare=True)

    def pieces(self) -> list[Simplex]:
        return [pr.piece for pr in self.pairs]

    def images(self) -> list[Simplex]:
        return [pr.image for pr in self.pairs]


def _require_lattice(*polys: PolytopeV) -> list[PolytopeV]:
    out = []
    for p in polys:
        if not p.is_lattice():
            raise NotLatticePolytope(f"non-integral vertices in {fmt_points(p.vertices)}")
        out.append(lift_to_3d(p))
    return out


def equidecompose(p: PolytopeV, q: PolytopeV) -> EquidecompCertificate:
    p, q = _require_lattice(p, q)
    ep, eq = fit_quasipolynomial(p), fit_quasipolynomial(q)
    if ep != eq:
        raise NotEhrhartEquivalent(ep, eq)
    dp, dq = decompose_polytope(p), decompose_polytope(q)
    tv = type_vector(dp)
    if tv != type_vector(dq):
        raise AssertionError("equal Ehrhart quasipolynomials but different type vectors")
    pairs = []
    for t in SimplexType:
        left = sorted((pc for pc in dp.pieces if pc.type == t), key=lambda pc: pc.simplex.key())
        right = sorted((pc for pc in dq.pieces if pc.type == t), key=lambda pc: pc.simplex.key())
        for a, b in zip(left, right):
            m = b.to_canonical.inverse().compose(a.to_canonical)
            pairs.append(CertificatePair(a.simplex, m, b.simplex, t))
    return EquidecompCertificate(tuple(pairs), {t.value: n for t, n in tv.items()})


def equidecomposable_quick(p: PolytopeV, q: PolytopeV) -> bool:
    p, q = _require_lattice(p, q)
    return type_vector(decompose_polytope(p)) == type_vector(decompose_polytope(q))


CHECKS = ("unimodular", "images", "disjoint", "volume", "points", "ehrhart")


@dataclass
class VerificationReport:
    checks: dict[str, bool]
    details: dict[str, str]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "checks": {name: {"passed": ok, "detail": self.details.get(name, "")}
                       for name, ok in self.checks.items()},
        }


def _type_sum(pieces: Sequence[Simplex]) -> QuasiPolynomial | None:
    total = QuasiPolynomial.zero()
    for s in pieces:
        try:
            total = total + closed_form(classify(s))
        except NotHalfUnimodular:
            return None
    return total


def _vol3(pieces: Sequence[Simplex]) -> Fraction:
    return sum((volume(s) for s in pieces if s.dim == 3), Fraction(0))


def _check_unimodular(cert, p, q):
    bad = [i for i, pr in enumerate(cert.pairs)
           if len(pr.map.linear) != 3 or not pr.map.is_unimodular()]
    return not bad, (f"non-unimodular maps at pairs {bad[:10]}" if bad
                     else "all maps in GL(3,Z) with integer translation")


def _check_images(cert, p, q):
    bad = [i for i, pr in enumerate(cert.pairs)
           if set(pr.map.apply_all(pr.piece.vertices)) != set(pr.image.vertices)]
    return not bad, (f"map(piece) != image at pairs {bad[:10]}" if bad
                     else "every map sends its piece onto its image")


def _check_disjoint(cert, p, q):
    left, right = pairwise_disjoint(cert.pieces()), pairwise_disjoint(cert.images())
    return not left and not right, f"overlapping index pairs: P {left[:5]}, P' {right[:5]}"


def _check_volume(cert, p, q):
    vols = (_vol3(cert.pieces()), polytope_volume(p), _vol3(cert.images()), polytope_volume(q))
    return len(set(vols)) == 1, "pieces {}, P {}, images {}, P' {}".format(*vols)


def _check_points(cert, p, q, scales):
    audits = {s: (audit_points(cert.pieces(), p, s), audit_points(cert.images(), q, s))
              for s in scales}
    ok = all(a == (0, 0, 0) and b == (0, 0, 0) for a, b in audits.values())
    return ok, "; ".join(f"s={s}: missed/double/stray P {a}, P' {b}" for s, (a, b) in audits.items())


def _check_ehrhart(cert, p, q):
    target_p, target_q = fit_quasipolynomial(p), fit_quasipolynomial(q)
    left, right = _type_sum(cert.pieces()), _type_sum(cert.images())
    labels_ok = left is not None and all(classify(pr.piece) == pr.type for pr in cert.pairs)
    ok = labels_ok and left == target_p and right == target_q
    return ok, f"sum over pieces {left}; sum over images {right}; Ehr(P) {target_p}; Ehr(P') {target_q}"


def verify_certificate(p: PolytopeV, q: PolytopeV, cert: EquidecompCertificate,
                       scales: Sequence[int] = (1, 2, 4)) -> VerificationReport:
    """Check a certificate from scratch; failures are reported, never raised.

    Only raw geometry is trusted here: the maps in the certificate are applied
    as given and the classifier's canonical maps are never consulted.
    """
    p, q = lift_to_3d(p), lift_to_3d(q)
    runners = {
        "unimodular": _check_unimodular,
        "images": _check_images,
        "disjoint": _check_disjoint,
        "volume": _check_volume,
        "points": lambda c, a, b: _check_points(c, a, b, scales),
        "ehrhart": _check_ehrhart,
    }
    checks, details = {}, {}
    for name, run in runners.items():
        try:
            checks[name], details[name] = run(cert, p, q)
        except (ValueError, ArithmeticError, IndexError, TypeError) as exc:
            checks[name], details[name] = False, f"check raised {type(exc).__name__}: {exc}"
    return VerificationReport(checks, details)
