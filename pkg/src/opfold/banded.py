"""Banded operator truncations and block-tridiagonal containers.

A BandedOperator stores an (size x size) truncation of a semi-infinite
banded operator together with its declared bandwidths; construction
rejects entries outside the band. Trust windows for identities on
truncations (which leading rows of a product are those of the infinite
operator) are computed at the call sites that know the semantics.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import BandViolation, DimensionMismatch, NotPositiveDefinite
from .linalg import Matrix
from .rationals import SignedSquare, as_fraction

__all__ = ["BandedOperator", "OrthonormalBandView", "BlockTridiagonal"]


class BandedOperator:
    __slots__ = ("size", "lower", "upper", "rows")

    def __init__(self, size: int, lower: int, upper: int, rows: Sequence[Sequence]):
        rs = tuple(tuple(as_fraction(v) for v in r) for r in rows)
        if len(rs) != size or any(len(r) != size for r in rs):
            raise DimensionMismatch("banded storage must be size x size")
        for i in range(size):
            for j in range(size):
                if (j - i > upper or i - j > lower) and rs[i][j] != 0:
                    raise BandViolation(f"nonzero entry at ({i},{j}) outside band ({lower},{upper})")
        self.size = size
        self.lower = lower
        self.upper = upper
        self.rows = rs

    @classmethod
    def from_fn(cls, size: int, lower: int, upper: int, fn: Callable[[int, int], object]) -> "BandedOperator":
        rows = [
            [fn(i, j) if (-lower <= j - i <= upper) else Fraction(0) for j in range(size)]
            for i in range(size)
        ]
        return cls(size, lower, upper, rows)

    @classmethod
    def identity(cls, size: int) -> "BandedOperator":
        return cls.from_fn(size, 0, 0, lambda i, j: Fraction(1))

    def entry(self, i: int, j: int) -> Fraction:
        if 0 <= i < self.size and 0 <= j < self.size:
            return self.rows[i][j]
        return Fraction(0)

    def __matmul__(self, other: "BandedOperator"):
        if not isinstance(other, BandedOperator):
            return NotImplemented
        if self.size != other.size:
            raise DimensionMismatch("size mismatch")
        n = self.size
        lo = min(self.lower + other.lower, n - 1)
        up = min(self.upper + other.upper, n - 1)
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            kmin, kmax = max(0, i - self.lower), min(n - 1, i + self.upper)
            for k in range(kmin, kmax + 1):
                a = self.rows[i][k]
                if a == 0:
                    continue
                jmin, jmax = max(0, k - other.lower), min(n - 1, k + other.upper)
                orow = other.rows[k]
                row = rows[i]
                for j in range(jmin, jmax + 1):
                    row[j] += a * orow[j]
        return BandedOperator(n, lo, up, rows)

    def power(self, k: int) -> "BandedOperator":
        if k < 0:
            raise ValueError("negative power")
        result = BandedOperator.identity(self.size)
        for _ in range(k):
            result = result @ self
        return result

    def minus_scalar(self, c) -> "BandedOperator":
        c = as_fraction(c)
        rows = [list(r) for r in self.rows]
        for i in range(self.size):
            rows[i][i] -= c
        return BandedOperator(self.size, self.lower, self.upper, rows)

    def transpose(self) -> "BandedOperator":
        return BandedOperator(self.size, self.upper, self.lower, tuple(zip(*self.rows)))

    def to_matrix(self) -> Matrix:
        return Matrix(self.rows)

    @property
    def is_symmetric(self) -> bool:
        return all(
            self.rows[i][j] == self.rows[j][i] for i in range(self.size) for j in range(i)
        )

    def __eq__(self, other):
        if not isinstance(other, BandedOperator):
            return NotImplemented
        return self.size == other.size and self.rows == other.rows

    def __hash__(self):
        return hash((self.size, self.rows))

    def __repr__(self):
        return f"BandedOperator(size={self.size}, lower={self.lower}, upper={self.upper})"


class OrthonormalBandView:
    """Squared-entry view of a symmetric banded operator in the orthonormal basis.

    Built from the raw symmetric bilinear table H_raw[i][j] = B(E s_i, s_j)
    and the squared norms of the monic sequence: the orthonormal entry is
    H_raw / sqrt(nu_i nu_j), held as (square, sign) so everything stays
    rational.
    """

    def __init__(self, raw: BandedOperator, norms_sq: Sequence[Fraction]):
        if len(norms_sq) < raw.size:
            raise DimensionMismatch("need one squared norm per row")
        for k, nu in enumerate(norms_sq[: raw.size]):
            if nu <= 0:
                raise NotPositiveDefinite(k, nu)
        self.raw = raw
        self.norms_sq = tuple(as_fraction(v) for v in norms_sq[: raw.size])

    @property
    def size(self) -> int:
        return self.raw.size

    @property
    def bandwidth(self) -> int:
        return max(self.raw.lower, self.raw.upper)

    def sq(self, i: int, j: int) -> Fraction:
        v = self.raw.entry(i, j)
        return v * v / (self.norms_sq[i] * self.norms_sq[j])

    def sign(self, i: int, j: int) -> int:
        v = self.raw.entry(i, j)
        return (v > 0) - (v < 0)

    def entry(self, i: int, j: int) -> SignedSquare:
        return SignedSquare(self.sq(i, j), self.sign(i, j))

    def float_entry(self, i: int, j: int) -> float:
        return self.entry(i, j).value()

    def symmetric_in_squares(self) -> bool:
        n = self.size
        return all(self.sq(i, j) == self.sq(j, i) for i in range(n) for j in range(i))


@dataclass(frozen=True)
class BlockTridiagonal:
    """Block-tridiagonal truncation: diag blocks D_n, sub C_n (row n+1), sup U_n."""

    diag: tuple[Matrix, ...]
    sub: tuple[Matrix, ...]
    sup: tuple[Matrix, ...]

    def __post_init__(self):
        if self.diag:
            b = self.diag[0].nrows
            for m in (*self.diag, *self.sub, *self.sup):
                if m.shape != (b, b):
                    raise DimensionMismatch("all blocks must share one square size")
        if len(self.sub) != max(0, len(self.diag) - 1) or len(self.sup) != len(self.sub):
            raise DimensionMismatch("need exactly nblocks-1 off-diagonal blocks")

    @property
    def nblocks(self) -> int:
        return len(self.diag)

    @property
    def block_size(self) -> int:
        return self.diag[0].nrows if self.diag else 0

    def block(self, i: int, j: int) -> Matrix:
        b = self.block_size
        if i == j:
            return self.diag[i]
        if i == j + 1:
            return self.sub[j]
        if j == i + 1:
            return self.sup[i]
        return Matrix.zeros(b, b)

    def to_matrix(self) -> Matrix:
        b, n = self.block_size, self.nblocks
        return Matrix.from_fn(n * b, n * b, lambda i, j: self.block(i // b, j // b)[i % b, j % b])

    def agree_through(self, other: "BlockTridiagonal", nblocks: int) -> bool:
        """Exact equality of the leading nblocks-sized triangles of both operators."""
        if self.block_size != other.block_size:
            return False
        for n in range(nblocks):
            if self.diag[n] != other.diag[n]:
                return False
            if n + 1 < nblocks and (self.sub[n] != other.sub[n] or self.sup[n] != other.sup[n]):
                return False
        return True
