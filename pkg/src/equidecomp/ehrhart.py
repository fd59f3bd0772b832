"""Ehrhart counting, quasipolynomial fitting and the half-unimodular closed forms."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial, lcm
from typing import Sequence

from .geometry import (
    CLOSED,
    Body,
    Simplex,
    affine_rank,
    count_scaled,
    facet_system,
    point,
    scaled_points,
)


class FitMismatch(AssertionError):
    """Fitted quasipolynomial disagrees with counting on the validation window."""


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def interpolate(xs: Sequence[int], ys: Sequence) -> list[Fraction]:
    """Exact Lagrange interpolation; coefficients in increasing degree."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi == 0:
            continue
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                basis = _poly_mul(basis, [Fraction(-xj), Fraction(1)])
                denom *= xi - xj
        for k, c in enumerate(basis):
            coeffs[k] += c * yi / denom
    return coeffs


@dataclass(frozen=True)
class QuasiPolynomial:
    """``k -> sum_i coeffs[k % period][i] * k**i``.

    Instances built through :meth:`make` are canonical: minimal period and no
    trailing zero coefficient columns, so ``==`` is equality of functions.
    """

    period: int
    coeffs: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def make(cls, rows: Sequence[Sequence]) -> "QuasiPolynomial":
        width = max((len(r) for r in rows), default=0)
        rows = [tuple(Fraction(x) for x in r) + (Fraction(0),) * (width - len(r)) for r in rows]
        while width and all(r[width - 1] == 0 for r in rows):
            width -= 1
        rows = [r[:width] for r in rows]
        period = len(rows)
        for d in range(1, period + 1):
            if period % d == 0 and all(rows[r] == rows[r % d] for r in range(period)):
                return cls(d, tuple(rows[:d]))
        raise AssertionError("unreachable")

    @classmethod
    def polynomial(cls, coeffs: Sequence) -> "QuasiPolynomial":
        return cls.make([coeffs])

    @property
    def degree(self) -> int:
        return len(self.coeffs[0]) - 1

    def __call__(self, k: int) -> Fraction:
        row = self.coeffs[k % self.period]
        return sum((c * k**i for i, c in enumerate(row)), Fraction(0))

    def _rows(self, period: int) -> list[tuple[Fraction, ...]]:
        return [self.coeffs[r % self.period] for r in range(period)]

    def __add__(self, other: "QuasiPolynomial") -> "QuasiPolynomial":
        period = lcm(self.period, other.period)
        rows = []
        for a, b in zip(self._rows(period), other._rows(period)):
            n = max(len(a), len(b))
            a = a + (Fraction(0),) * (n - len(a))
            b = b + (Fraction(0),) * (n - len(b))
            rows.append(tuple(x + y for x, y in zip(a, b)))
        return QuasiPolynomial.make(rows)

    def __rmul__(self, c) -> "QuasiPolynomial":
        return QuasiPolynomial.make([tuple(c * x for x in row) for row in self.coeffs])

    def __sub__(self, other: "QuasiPolynomial") -> "QuasiPolynomial":
        return self + (-1) * other

    @classmethod
    def zero(cls) -> "QuasiPolynomial":
        return cls(1, ((),))

    def leading_row(self) -> tuple[Fraction, ...]:
        return tuple(row[-1] if row else Fraction(0) for row in self.coeffs)

    def to_json(self) -> dict:
        return {
            "period": self.period,
            "degree": self.degree,
            "coefficients": [[str(c) for c in row] for row in self.coeffs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "QuasiPolynomial":
        return cls.make([[Fraction(c) for c in row] for row in data["coefficients"]])

    def __str__(self) -> str:
        def poly(row):
            terms = []
            for i in range(len(row) - 1, -1, -1):
                c = row[i]
                if c == 0:
                    continue
                mono = "" if i == 0 else ("k" if i == 1 else f"k^{i}")
                if mono and abs(c) == 1:
                    coef = "-" if c < 0 else ""
                else:
                    coef = str(c) + ("*" if mono else "")
                terms.append(coef + mono)
            return " + ".join(terms).replace("+ -", "- ") or "0"

        if self.period == 1:
            return poly(self.coeffs[0])
        parts = [f"[k = {r} mod {self.period}] {poly(row)}" for r, row in enumerate(self.coeffs)]
        return "; ".join(parts)


def count(body: Body, k: int, mode: str = CLOSED) -> int:
    """|k B cap Z^d| (or of the relative interior of kB)."""
    return count_scaled(body, k, mode)


def denominator(body: Body) -> int:
    return lcm(*(c.denominator for v in body.vertices for c in v))


def fit_quasipolynomial(body: Body, mode: str = CLOSED) -> QuasiPolynomial:
    D = denominator(body)
    d = affine_rank(body.vertices)
    fs = facet_system(body)
    window = D * (d + 1)
    counts = {k: count_scaled(body, k, mode, fs) for k in range(1, 2 * window + 1)}
    rows = []
    for r in range(D):
        ks = [k for k in range(1, window + 1) if k % D == r][: d + 1]
        rows.append(interpolate(ks, [counts[k] for k in ks]))
    qp = QuasiPolynomial.make(rows)
    bad = [k for k, v in counts.items() if qp(k) != v]
    if bad:
        raise FitMismatch(f"fitted {qp} disagrees with counts at k = {bad[:5]}")
    return qp


def ehrhart_equivalent(a: Body, b: Body) -> bool:
    if a.ambient_dim != b.ambient_dim:
        return False
    return fit_quasipolynomial(a) == fit_quasipolynomial(b)


class SimplexType(Enum):
    """The nine classes of half-unimodular simplices in R^3."""

    D0_1 = "Delta_0^1"
    D1_1 = "Delta_1^1"
    D2_1 = "Delta_2^1"
    D3_1 = "Delta_3^1"
    D0_0 = "Delta_0^0"
    D1_0 = "Delta_1^0"
    D2_0 = "Delta_2^0"
    D2_PRIME = "Delta'_2"
    D3_PRIME = "Delta'_3"

    @property
    def dim(self) -> int:
        return int(self.value[-1]) if self.is_prime else int(self.value[6])

    @property
    def is_prime(self) -> bool:
        return "'" in self.value

    @property
    def lattice_points(self) -> int:
        return 0 if self.is_prime else int(self.value[-1])

    @property
    def canonical_vertices(self) -> tuple[tuple[Fraction, ...], ...]:
        h = Fraction(1, 2)
        e = [(h, 0, 0), (0, h, 0), (0, 0, h)]
        i = self.dim
        if self.is_prime:
            base = (h, h, 0)
            verts = [base] + [tuple(b + x for b, x in zip(base, e[j])) for j in range(i)]
        elif self.lattice_points == 1:
            verts = [(0, 0, 0)] + e[:i]
        else:
            verts = e[: i + 1]
        return tuple(point(v) for v in verts)

    @property
    def representative(self) -> Simplex:
        return Simplex(self.canonical_vertices)

    @classmethod
    def from_label(cls, label: str) -> "SimplexType":
        return cls(label)


SEVEN_TYPES = (
    SimplexType.D0_1,
    SimplexType.D0_0,
    SimplexType.D1_1,
    SimplexType.D1_0,
    SimplexType.D2_1,
    SimplexType.D2_0,
    SimplexType.D3_1,
)


def _binomial_rows(i: int, lattice: bool) -> list[list[Fraction]]:
    """Rows (even k, odd k) of binom(ceil(k/2) - 1, i), zeroing odd k for the latticeless types."""
    # binom(x, i) as a polynomial in x, then substitute x = k/2 - 1 or x = (k - 1)/2
    binom_x = [Fraction(1)]
    for j in range(i):
        binom_x = _poly_mul(binom_x, [Fraction(-j), Fraction(1)])
    binom_x = [c / factorial(i) for c in binom_x]

    def substitute(shift: Fraction) -> list[Fraction]:
        out = [Fraction(0)]
        power = [Fraction(1)]
        for c in binom_x:
            out = _add(out, [c * x for x in power])
            power = _poly_mul(power, [shift, Fraction(1, 2)])
        return out

    even = substitute(Fraction(-1))
    odd = substitute(Fraction(-1, 2)) if lattice else [Fraction(0)]
    return [even, odd]


def _add(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [x + y for x, y in zip(a, b)]


def _from_signed(plain: Sequence, signed: Sequence, scale: int) -> QuasiPolynomial:
    """Quasipolynomial (sum plain[i] k^i + (-1)^k sum signed[i] k^i) / scale."""
    even = [Fraction(p + s, scale) for p, s in zip(plain, signed)]
    odd = [Fraction(p - s, scale) for p, s in zip(plain, signed)]
    return QuasiPolynomial.make([even, odd])


# Expansions in the quasi-monomials k^i and (-1)^k k^i, as printed in the
# literature; kept to document where they disagree with counting.
PRINTED_FORMULAS = {
    SimplexType.D0_1: _from_signed([1], [0], 1),
    SimplexType.D1_1: _from_signed([-1, 2], [1, 0], 4),
    SimplexType.D2_1: _from_signed([11, -10, 2], [5, -2, 0], 16),
    SimplexType.D3_1: _from_signed([-63, 67, -21, 2], [-33, 21, -3, 0], 96),
    SimplexType.D0_0: _from_signed([1], [1], 2),
    SimplexType.D1_0: _from_signed([-2, 1], [-2, 1], 4),
    SimplexType.D2_0: _from_signed([8, -6, 1], [8, -6, 1], 16),
    SimplexType.D2_PRIME: _from_signed([7, -6, 2], [9, -6, 0], 16),
    SimplexType.D3_PRIME: _from_signed([-45, 43, -9, 2], [-51, 45, -15, 0], 96),
}


# The printed Delta'_3 expansion has the k^2 coefficients 15 and 9 swapped;
# with -(9 (-1)^k + 15) k^2 it matches counting for every k.
_PRIME_FORMS = {
    SimplexType.D2_PRIME: PRINTED_FORMULAS[SimplexType.D2_PRIME],
    SimplexType.D3_PRIME: _from_signed([-45, 43, -15, 2], [-51, 45, -9, 0], 96),
}


def closed_form(t: SimplexType) -> QuasiPolynomial:
    """Ehrhart quasipolynomial of the relative interior of the type's representative."""
    if t.is_prime:
        return _PRIME_FORMS[t]
    return QuasiPolynomial.make(_binomial_rows(t.dim, t.lattice_points == 1))


def basis_evaluation_matrix(kmax: int = 7) -> list[list[int]]:
    """Rows: the seven lattice-type closed forms; columns: k = 1..kmax."""
    return [[int(closed_form(t)(k)) for k in range(1, kmax + 1)] for t in SEVEN_TYPES]


def orbit_profile_1d(body: Body, q: int) -> dict[Fraction, int]:
    """Counts of (1/q)Z-points of a 1-polytope per orbit of the unimodular group.

    The orbit of a/q is labelled by min(a, -a) mod q, divided by q; label 0 is Z.
    """
    if body.ambient_dim != 1:
        raise ValueError("orbit profiles are defined for subsets of the line")
    profile = {Fraction(r, q): 0 for r in range(q // 2 + 1)}
    fs = facet_system(body)
    for (a,) in scaled_points(fs, body.vertices, q, CLOSED):
        profile[Fraction(min(a % q, -a % q), q)] += 1
    return profile
