"""Exact integer and rational linear algebra for small dimensions.

Rational scalars are :class:`fractions.Fraction`; integer matrices are tuples
of row tuples.  Everything here is arbitrary precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

Matrix = tuple[tuple[int, ...], ...]


class NotSaturated(ValueError):
    """The given vectors cannot be extended to a lattice basis."""


class NotCoprime(ValueError):
    pass


def as_matrix(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity(d: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def transpose(m: Sequence[Sequence]) -> tuple:
    return tuple(zip(*m)) if m else ()


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def det(m: Sequence[Sequence]) -> int | Fraction:
    """Exact determinant by cofactor expansion (fine up to 4x4)."""
    n = len(m)
    if n == 0:
        return 1
    if any(len(row) != n for row in m):
        raise ValueError("determinant of a non-square matrix")
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in (tuple(r) for r in m[1:])]
        total += (-1) ** j * m[0][j] * det(minor)
    return total


def _integer_row(row: Sequence) -> list[int]:
    den = lcm(*(x.denominator for x in row)) if row else 1
    return [x.numerator * (den // x.denominator) for x in row]


def rank(rows: Sequence[Sequence]) -> int:
    """Rank over Q, by fraction-free elimination on integer-scaled rows."""
    work = [_integer_row(r) for r in rows]
    work = [r for r in work if any(r)]
    ncols = len(work[0]) if work else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(work)) if work[i][c]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        a = work[r][c]
        for i in range(r + 1, len(work)):
            b = work[i][c]
            if b:
                work[i] = [a * x - b * y for x, y in zip(work[i], work[r])]
        r += 1
    return r


def row_echelon(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q.  Returns (nonzero rows, pivot columns)."""
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[int, ...]]:
    """Basis of the rational null space, each vector scaled to a primitive integer one."""
    red, pivots = row_echelon(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(primitive(v))
    return basis


def primitive(v: Sequence) -> tuple[int, ...]:
    """Smallest positive integer multiple of a rational vector, divided by its content."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def solve(m: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...]:
    """Solve the square nonsingular system m x = b over Q."""
    n = len(m)
    aug = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(m, b)]
    red, pivots = row_echelon(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return tuple(row[n] for row in red)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Column Hermite normal form.

    Returns ``(H, U)`` with ``m @ U == H``, ``U`` unimodular and ``H`` in
    column echelon form: each pivot is positive and the entries to the left of
    a pivot in its row are reduced into ``[0, pivot)``.
    """
    a = [list(map(int, row)) for row in m]
    nrows = len(a)
    ncols = len(a[0]) if nrows else 0
    u = [list(row) for row in identity(ncols)]

    def colop(i: int, j: int, p: int, q: int, r: int, s: int) -> None:
        # (col_i, col_j) <- (p col_i + q col_j, r col_i + s col_j)
        for mat in (a, u):
            for row in mat:
                x, y = row[i], row[j]
                row[i], row[j] = p * x + q * y, r * x + s * y

    piv_col = 0
    for row in range(nrows):
        if piv_col >= ncols:
            break
        for j in range(piv_col + 1, ncols):
            x, y = a[row][piv_col], a[row][j]
            if y == 0:
                continue
            g, s, t = _xgcd(x, y)
            # [[s, -y/g], [t, x/g]] has determinant 1
            colop(piv_col, j, s, t, -y // g, x // g)
        if a[row][piv_col] == 0:
            continue
        if a[row][piv_col] < 0:
            _negate(a, u, piv_col)
        pv = a[row][piv_col]
        for j in range(piv_col):
            f = a[row][j] // pv
            if f:
                for mat in (a, u):
                    for r_ in mat:
                        r_[j] -= f * r_[piv_col]
        piv_col += 1
    return as_matrix(a), as_matrix(u)


def _negate(a: list[list[int]], u: list[list[int]], c: int) -> None:
    for mat in (a, u):
        for row in mat:
            row[c] = -row[c]


def int_inverse(m: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of a unimodular integer matrix."""
    n = len(m)
    d = det(m)
    if d not in (1, -1):
        raise ValueError("matrix is not unimodular")
    if n == 1:
        return ((d,),)
    # adjugate divided by the determinant (which is its own inverse)
    return tuple(
        tuple(d * (-1) ** (i + j) * det([r[:i] + r[i + 1:] for k, r in enumerate(map(tuple, m)) if k != j])
              for j in range(n))
        for i in range(n)
    )


def complete_to_basis(vs: Sequence[Sequence[int]], d: int | None = None) -> Matrix:
    """Unimodular d x d matrix whose first columns are ``vs``.

    Raises NotSaturated when the vectors do not span a saturated sublattice.
    """
    vs = [tuple(int(x) for x in v) for v in vs]
    if d is None:
        if not vs:
            raise ValueError("dimension required for an empty vector list")
        d = len(vs[0])
    r = len(vs)
    if r == 0:
        return identity(d)
    if r > d:
        raise NotSaturated("more vectors than the dimension")
    # rows of vs^T times U = [B | 0], so vs^T = B V[:r] with V = U^-1
    h, u = hnf(vs)
    b = [row[:r] for row in h]
    if abs(det(b)) != 1:
        raise NotSaturated(f"vectors {vs} do not extend to a lattice basis")
    v = int_inverse(u)
    extra = [v[i] for i in range(r, d)]
    cols = list(vs) + extra
    return transpose(cols)


def integer_kernel(rows: Sequence[Sequence[int]], d: int) -> list[tuple[int, ...]]:
    """Lattice basis of {x in Z^d : rows x = 0}."""
    if not rows:
        return [tuple(int(i == j) for i in range(d)) for j in range(d)]
    h, u = hnf(rows)
    cols = transpose(u)
    ht = transpose(h)
    return [cols[j] for j in range(d) if all(x == 0 for x in ht[j])]


def solve_integer(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> tuple[int, ...] | None:
    """Some integer solution of rows x = rhs, or None if there is none."""
    d = len(rows[0])
    h, u = hnf(rows)
    y = [0] * d
    # H is column echelon; walk rows, each pivot determines one y
    col = 0
    for i, row in enumerate(h):
        acc = sum(row[j] * y[j] for j in range(col))
        if col < d and row[col] != 0:
            q, r = divmod(rhs[i] - acc, row[col])
            if r:
                return None
            y[col] = q
            col += 1
        elif acc != rhs[i]:
            return None
    return matvec(u, y)


def inv_mod(a: int, q: int) -> int:
    if q < 2:
        raise ValueError("modulus must be at least 2")
    try:
        return pow(a, -1, q)
    except ValueError:
        raise NotCoprime(f"{a} is not invertible modulo {q}") from None


@dataclass(frozen=True)
class UnimodularMap:
    """Affine map x -> linear @ x + translation.

    Construction does not validate; call :meth:`is_unimodular` (certificates
    read from disk may carry broken maps on purpose).
    """

    linear: tuple[tuple, ...]
    translation: tuple

    @classmethod
    def identity(cls, d: int = 3) -> "UnimodularMap":
        return cls(identity(d), (0,) * d)

    @classmethod
    def translation_by(cls, t: Sequence[int]) -> "UnimodularMap":
        return cls(identity(len(t)), tuple(int(x) for x in t))

    @property
    def dim(self) -> int:
        return len(self.translation)

    def is_unimodular(self) -> bool:
        entries = [x for row in self.linear for x in row] + list(self.translation)
        if any(Fraction(x).denominator != 1 for x in entries):
            return False
        if len(self.linear) != self.dim or any(len(r) != self.dim for r in self.linear):
            return False
        return det(self.linear) in (1, -1)

    def __call__(self, x: Sequence) -> tuple:
        if all(type(c) is int for row in self.linear for c in row) and all(
                type(c) is int for c in self.translation):
            if all(type(c) is int for c in x):
                return tuple(sum(a * b for a, b in zip(row, x)) + t
                             for row, t in zip(self.linear, self.translation))
            # integer map: work on the common denominator of x
            den = lcm(*(c.denominator for c in x))
            xs = [c.numerator * (den // c.denominator) for c in x]
            return tuple(Fraction(sum(a * b for a, b in zip(row, xs)) + t * den, den)
                         for row, t in zip(self.linear, self.translation))
        return tuple(a + t for a, t in zip(matvec(self.linear, x), self.translation))

    def apply_all(self, pts) -> tuple:
        return tuple(self(p) for p in pts)

    def compose(self, inner: "UnimodularMap") -> "UnimodularMap":
        """self after inner."""
        lin = matmul(self.linear, inner.linear)
        t = self(inner.translation)
        return UnimodularMap(as_matrix(lin), tuple(int(x) for x in t))

    def inverse(self) -> "UnimodularMap":
        inv = int_inverse(self.linear)
        t = matvec(inv, self.translation)
        return UnimodularMap(inv, tuple(-int(x) for x in t))


def small_unimodular(n: int) -> list[Matrix]:
    """All n x n 0/1 matrices with determinant +-1 (they hit every class of GL(n, F_2))."""
    out = []
    for bits in range(1 << (n * n)):
        m = tuple(tuple((bits >> (i * n + j)) & 1 for j in range(n)) for i in range(n))
        if det(m) in (1, -1):
            out.append(m)
    return out

