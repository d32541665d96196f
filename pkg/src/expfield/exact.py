"""Exact rational arithmetic and exact linear algebra.

Scalars are :class:`fractions.Fraction`.  The elimination routines in the
second half of the module only use ``+ - * /`` and truthiness, so they also
work over the presented fraction fields of :mod:`expfield.ideals`.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Rational = Fraction


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


class QMatrix:
    """Dense matrix over the rationals.

    Immutable: rows are stored as a tuple of tuples of ``Fraction``.
    """

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence], cols: int | None = None):
        data = tuple(tuple(as_rational(x) for x in row) for row in entries)
        if cols is None:
            cols = len(data[0]) if data else 0
        for row in data:
            if len(row) != cols:
                raise ValueError("ragged matrix: every row needs %d entries" % cols)
        self.entries = data
        self.rows = len(data)
        self.cols = cols

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls([[0] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other):
        return (isinstance(other, QMatrix) and self.cols == other.cols
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.cols, self.entries))

    def __repr__(self):
        body = ", ".join("(" + ", ".join(str(x) for x in r) + ")" for r in self.entries)
        return "QMatrix[%dx%d](%s)" % (self.rows, self.cols, body)

    def transpose(self) -> "QMatrix":
        return QMatrix([[self.entries[i][j] for i in range(self.rows)]
                        for j in range(self.cols)], self.rows)

    def matvec(self, v: Sequence) -> tuple[Fraction, ...]:
        v = [as_rational(x) for x in v]
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum((a * b for a, b in zip(row, v)), Fraction(0))
                     for row in self.entries)


def _integer_rows(rows) -> list[list[int]]:
    out = []
    for row in rows:
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        out.append([int(x * den) for x in row])
    return out


def _bareiss_rank(a: list[list[int]], ncols: int) -> int:
    # fraction-free: every division below is exact over the integers
    rank = 0
    prev = 1
    nrows = len(a)
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        p = a[rank][col]
        for r in range(rank + 1, nrows):
            f = a[r][col]
            a[r] = [(p * a[r][c] - f * a[rank][c]) // prev for c in range(ncols)]
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def q_rank(m: QMatrix | Sequence[Sequence]) -> int:
    """Rank over Q via fraction-free (Bareiss) elimination."""
    if not isinstance(m, QMatrix):
        m = QMatrix(m) if len(m) else QMatrix([], 0)
    if m.rows == 0 or m.cols == 0:
        return 0
    return _bareiss_rank(_integer_rows(m.entries), m.cols)


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Gauss-Jordan elimination over any exact field.

    Returns ``(reduced_rows, pivot_columns)``; zero rows are dropped.  Entries
    must support ``+ - * /`` and be falsy exactly when zero.
    """
    a = [list(r) for r in rows]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(a)) if a[i][col]), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = a[r][col]
        a[r] = [x / inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def kernel_basis(rows: Sequence[Sequence], ncols: int, zero, one) -> list[list]:
    """Right kernel basis, one vector per free column.

    Each vector has a 1 in its free column; with pivots to the left that makes
    the first nonzero entry of every returned vector equal to 1 only after
    normalisation, which :func:`q_kernel` performs for rationals.
    """
    reduced, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [zero] * ncols
        v[fc] = one
        for row, pc in zip(reduced, pivots):
            v[pc] = zero - row[fc]
        basis.append(v)
    return basis


def q_kernel(m: QMatrix | Sequence[Sequence], cols: int | None = None) -> list[tuple[Fraction, ...]]:
    """Basis of the right kernel, each vector scaled so its first nonzero entry is 1."""
    if not isinstance(m, QMatrix):
        m = QMatrix(m, cols)
    basis = kernel_basis(m.entries, m.cols, Fraction(0), Fraction(1))
    out = []
    for v in basis:
        lead = next(x for x in v if x)
        out.append(tuple(x / lead for x in v))
    return out


def q_solve(m: QMatrix | Sequence[Sequence], rhs: Sequence, cols: int | None = None):
    """One solution of ``m x = rhs`` (free coordinates set to 0), or None."""
    if not isinstance(m, QMatrix):
        m = QMatrix(m, cols)
    return solve(m.entries, [as_rational(b) for b in rhs], m.cols, Fraction(0))


def solve(rows: Sequence[Sequence], rhs: Sequence, ncols: int, zero):
    """Particular solution of a linear system over an exact field.

    Unconstrained coordinates are set to ``zero``.  Returns None when the
    system is inconsistent.
    """
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    reduced, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [zero] * ncols
    for row, pc in zip(reduced, pivots):
        x[pc] = row[ncols]
    return x


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    """Rank over an exact field by Gauss-Jordan elimination."""
    return len(rref(rows, ncols)[1])


def fraction_free_rank(rows: Sequence[Sequence], ncols: int) -> int:
    """Rank over an integral domain without any division.

    Row operations are ``r_j <- p * r_j - a_j * r_i``; this is valid in a
    domain because a nonzero pivot never becomes a zero divisor.
    """
    a = [list(r) for r in rows]
    rk = 0
    for col in range(ncols):
        pivot = next((i for i in range(rk, len(a)) if a[i][col]), None)
        if pivot is None:
            continue
        a[rk], a[pivot] = a[pivot], a[rk]
        p = a[rk][col]
        for i in range(rk + 1, len(a)):
            f = a[i][col]
            if f:
                a[i] = [p * x - f * y for x, y in zip(a[i], a[rk])]
        rk += 1
        if rk == len(a):
            break
    return rk


def bareiss_det(rows: Sequence[Sequence], one, zero):
    """Determinant of a square matrix by Bareiss elimination.

    The divisions are exact in the underlying domain; over a fraction field
    they are plain field divisions.
    """
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return one
    sign = 1
    prev = one
    for k in range(n - 1):
        if not a[k][k]:
            swap = next((i for i in range(k + 1, n) if a[i][k]), None)
            if swap is None:
                return zero
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
        prev = a[k][k]
    det = a[n - 1][n - 1]
    return det if sign > 0 else zero - det


def primitive_integer_vector(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers, first nonzero entry positive."""
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    lead = next(x for x in ints if x)
    if lead < 0:
        g = -g
    return tuple(x // g for x in ints)


def rref_key(rows: Sequence[Sequence[Fraction]], ncols: int) -> tuple:
    """Canonical hashable key for the row space of a rational matrix."""
    reduced, _ = rref([[as_rational(x) for x in r] for r in rows], ncols)
    return tuple(tuple(r) for r in reduced)
