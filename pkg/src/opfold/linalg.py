"""Exact dense matrices and fraction-free elimination kernels.

Matrix is generic over its entry ring (rationals for numeric work,
Poly entries for polynomial matrices); the solvers below require
Fraction entries. Elimination is fraction-free: Bareiss two-product
updates over denominator-cleared integer rows, with periodic content
stripping on the incremental kernel to control coefficient growth.
"""
from __future__ import annotations

from bisect import insort
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Iterable, Sequence

from .errors import DimensionMismatch, SingularMatrix
from .rationals import as_fraction

__all__ = ["Matrix", "solve_linear", "nullspace", "ldlt", "IntEchelon"]


class Matrix:
    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable]):
        rs = tuple(tuple(r) for r in rows)
        if rs and any(len(r) != len(rs[0]) for r in rs):
            raise DimensionMismatch("ragged rows")
        object.__setattr__(self, "rows", rs)

    # -- constructors -------------------------------------------------
    @classmethod
    def identity(cls, n: int, one=Fraction(1), zero=Fraction(0)) -> "Matrix":
        return cls(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)))

    @classmethod
    def zeros(cls, nrows: int, ncols: int, zero=Fraction(0)) -> "Matrix":
        return cls(tuple((zero,) * ncols for _ in range(nrows)))

    @classmethod
    def from_fn(cls, nrows: int, ncols: int, fn: Callable[[int, int], object]) -> "Matrix":
        return cls(tuple(tuple(fn(i, j) for j in range(ncols)) for i in range(nrows)))

    @classmethod
    def rational(cls, rows: Iterable[Iterable]) -> "Matrix":
        """Build with every entry coerced through as_fraction."""
        return cls(tuple(tuple(as_fraction(v) for v in r) for r in rows))

    # -- structure ----------------------------------------------------
    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def __getitem__(self, key):
        i, j = key
        return self.rows[i][j]

    def row(self, i: int):
        return self.rows[i]

    def col(self, j: int):
        return tuple(r[j] for r in self.rows)

    # -- algebra -------------------------------------------------------
    def __add__(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        return Matrix(tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)))

    def __sub__(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} - {other.shape}")
        return Matrix(tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(self.rows, other.rows)))

    def __neg__(self):
        return Matrix(tuple(tuple(-a for a in r) for r in self.rows))

    def __mul__(self, scalar):
        return Matrix(tuple(tuple(a * scalar for a in r) for r in self.rows))

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix"):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        cols = other.ncols
        out = []
        for ra in self.rows:
            orow = []
            for j in range(cols):
                acc = None
                for a, rb in zip(ra, other.rows):
                    term = a * rb[j]
                    acc = term if acc is None else acc + term
                orow.append(acc if acc is not None else Fraction(0))
            out.append(tuple(orow))
        return Matrix(tuple(out))

    def transpose(self) -> "Matrix":
        return Matrix(tuple(zip(*self.rows))) if self.rows else self

    def map(self, fn: Callable) -> "Matrix":
        return Matrix(tuple(tuple(fn(a) for a in r) for r in self.rows))

    @property
    def is_zero(self) -> bool:
        return all(a == 0 for r in self.rows for a in r)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        body = "; ".join("[" + ", ".join(repr(a) for a in r) + "]" for r in self.rows)
        return f"Matrix([{body}])"


def _int_rows(mat_rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    """Clear denominators row by row (row scaling leaves solution sets alone)."""
    out = []
    for r in mat_rows:
        den = 1
        for v in r:
            den = lcm(den, as_fraction(v).denominator)
        out.append([int(as_fraction(v) * den) for v in r])
    return out


def solve_linear(a: Matrix, b: Matrix) -> Matrix:
    """Solve a @ x = b exactly via fraction-free Bareiss elimination.

    a must be square with Fraction entries; b is a matrix of right-hand
    sides (one per column). Raises SingularMatrix when no unique solution
    exists.
    """
    if not a.is_square:
        raise DimensionMismatch("coefficient matrix must be square")
    n = a.nrows
    if b.nrows != n:
        raise DimensionMismatch("right-hand side has wrong row count")
    m = b.ncols
    work = _int_rows([list(ra) + list(rb) for ra, rb in zip(a.rows, b.rows)])
    prev = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if work[r][k] != 0), None)
        if piv is None:
            raise SingularMatrix(f"rank deficiency at column {k}")
        if piv != k:
            work[k], work[piv] = work[piv], work[k]
        pk = work[k][k]
        for i in range(k + 1, n):
            lik = work[i][k]
            row = work[i]
            prow = work[k]
            for j in range(k + 1, n + m):
                row[j] = (row[j] * pk - lik * prow[j]) // prev
            row[k] = 0
        prev = pk
    # back substitution with exact rationals
    sol = [[Fraction(0)] * m for _ in range(n)]
    for i in range(n - 1, -1, -1):
        for j in range(m):
            acc = Fraction(work[i][n + j])
            for k in range(i + 1, n):
                acc -= work[i][k] * sol[k][j]
            sol[i][j] = acc / work[i][i]
    return Matrix(tuple(tuple(r) for r in sol))


def inverse(a: Matrix) -> Matrix:
    return solve_linear(a, Matrix.identity(a.nrows))


def ldlt(g: Matrix):
    """Symmetric factorization g = L D L^T with unit lower L.

    Returns (L rows, D pivots) as plain lists. Raises SingularMatrix on a
    zero pivot; positivity policy is the caller's concern (quasi-definite
    inputs are legal here).
    """
    n = g.nrows
    L = [[Fraction(0)] * n for _ in range(n)]
    D: list[Fraction] = []
    for j in range(n):
        d = as_fraction(g[j, j])
        for k in range(j):
            d -= L[j][k] * L[j][k] * D[k]
        if d == 0:
            raise SingularMatrix(f"zero Gram pivot at index {j}")
        D.append(d)
        L[j][j] = Fraction(1)
        for i in range(j + 1, n):
            v = as_fraction(g[i, j])
            for k in range(j):
                v -= L[i][k] * L[j][k] * D[k]
            L[i][j] = v / d
    return L, D


def unit_lower_inverse(L: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(L)
    M = [[Fraction(0)] * n for _ in range(n)]
    for j in range(n):
        M[j][j] = Fraction(1)
        for i in range(j + 1, n):
            acc = Fraction(0)
            for k in range(j, i):
                acc -= L[i][k] * M[k][j]
            M[i][j] = acc
    return M


class IntEchelon:
    """Incremental integer row echelon over a fixed column count.

    Rows arrive as Fraction/int vectors; each is denominator-cleared and
    reduced against the stored pivot rows with two-product updates,
    stripping the content gcd periodically. Supports rank queries,
    residual checks, and canonical rational nullspace extraction.
    """

    _STRIP_EVERY = 24

    def __init__(self, ncols: int):
        self.ncols = ncols
        self._pivots: dict[int, list[int]] = {}
        self._cols: list[int] = []  # sorted pivot columns

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def pivot_cols(self) -> tuple[int, ...]:
        return tuple(self._cols)

    @staticmethod
    def _strip(row: list[int]) -> None:
        g = 0
        for v in row:
            if v:
                g = gcd(g, v)
                if g == 1:
                    return
        if g > 1:
            for i, v in enumerate(row):
                row[i] = v // g

    def _integerize(self, row: Sequence) -> list[int]:
        den = 1
        vals = [as_fraction(v) for v in row]
        for v in vals:
            den = lcm(den, v.denominator)
        return [int(v * den) for v in vals]

    def reduce(self, row: Sequence) -> list[int]:
        """Return the residual of row against the current echelon."""
        work = self._integerize(row)
        if len(work) != self.ncols:
            raise DimensionMismatch("row length mismatch")
        steps = 0
        for c in self._cols:
            v = work[c]
            if v == 0:
                continue
            p = self._pivots[c]
            pc = p[c]
            g = gcd(v, pc)
            mult_row, mult_piv = pc // g, v // g
            # pivot row is zero before column c, but work may not be:
            # the whole row has to carry the scaling.
            if mult_row != 1:
                for i in range(c):
                    work[i] *= mult_row
            for i in range(c, self.ncols):
                work[i] = work[i] * mult_row - p[i] * mult_piv
            steps += 1
            if steps % self._STRIP_EVERY == 0:
                self._strip(work)
        self._strip(work)
        return work

    def add(self, row: Sequence) -> bool:
        """Insert a row; returns True when it increased the rank."""
        res = self.reduce(row)
        lead = next((i for i, v in enumerate(res) if v != 0), None)
        if lead is None:
            return False
        if res[lead] < 0:
            res = [-v for v in res]
        self._pivots[lead] = res
        insort(self._cols, lead)
        return True

    def is_member(self, row: Sequence) -> bool:
        """True when row lies in the current row space."""
        return all(v == 0 for v in self.reduce(row))

    def rref_rows(self) -> dict[int, list[Fraction]]:
        """Fully reduced rows keyed by pivot column, pivot normalized to 1."""
        rows: dict[int, list[Fraction]] = {}
        for c in reversed(self._cols):
            r = [Fraction(v) for v in self._pivots[c]]
            piv = r[c]
            r = [v / piv for v in r]
            for c2 in self._cols:
                if c2 > c and r[c2] != 0:
                    factor = r[c2]
                    done = rows[c2]
                    for i in range(c2, self.ncols):
                        r[i] -= factor * done[i]
            rows[c] = r
        return rows

    def nullspace(self) -> list[list[Fraction]]:
        """Canonical basis of the solution set of (stored rows) @ x = 0.

        One vector per free column in ascending order, unit entry at the
        free column.
        """
        rref = self.rref_rows()
        pivot_set = set(self._cols)
        basis = []
        for f in range(self.ncols):
            if f in pivot_set:
                continue
            vec = [Fraction(0)] * self.ncols
            vec[f] = Fraction(1)
            for c in self._cols:
                if c < f:
                    vec[c] = -rref[c][f]
            basis.append(vec)
        return basis


def nullspace(a: Matrix) -> list[list[Fraction]]:
    """Exact rational nullspace basis of a (canonical RREF convention)."""
    ech = IntEchelon(a.ncols)
    for r in a.rows:
        ech.add(r)
    return ech.nullspace()
