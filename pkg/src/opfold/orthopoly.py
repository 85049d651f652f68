"""Monic orthogonal sequences, recurrence operators, and connection matrices.

Everything is generated from a BilinearForm by exact Gram factorization.
Square roots never appear: orthonormal data is exposed as squared
rationals plus signs, and every operator identity has a monic-conjugated
form that stays in Fraction arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .banded import BandedOperator, OrthonormalBandView
from .errors import (
    BandViolation,
    IdentityViolated,
    NotPositiveDefinite,
    SymmetryViolated,
)
from .linalg import ldlt, unit_lower_inverse
from .measures import BilinearForm, gram_matrix
from .poly import Poly
from .rationals import SignedSquare, as_fraction

__all__ = [
    "MonicSequence",
    "OrthonormalView",
    "monic_sequence",
    "JacobiMatrix",
    "jacobi_matrix",
    "BandedRecurrence",
    "banded_recurrence",
    "reference_abc",
    "ConnectionMatrix",
    "connection_matrix",
]


@dataclass(frozen=True)
class MonicSequence:
    """Monic polynomials s_0..s_n orthogonal under a bilinear form.

    norms_sq[k] = B(s_k, s_k); entries may be negative in quasi-definite
    mode, never zero.
    """

    polys: tuple[Poly, ...]
    norms_sq: tuple[Fraction, ...]
    form: BilinearForm

    def __len__(self) -> int:
        return len(self.polys)

    def poly(self, n: int) -> Poly:
        return self.polys[n]

    def norm_sq(self, n: int) -> Fraction:
        return self.norms_sq[n]

    @property
    def is_positive(self) -> bool:
        return all(v > 0 for v in self.norms_sq)

    def orthonormal(self) -> "OrthonormalView":
        for k, v in enumerate(self.norms_sq):
            if v <= 0:
                raise NotPositiveDefinite(k, v)
        return OrthonormalView(self)


@dataclass(frozen=True)
class OrthonormalView:
    """Scaled view s_n / sqrt(norm); positive leading coefficient.

    Exact quantities are squares; float_poly materializes coefficients.
    """

    base: MonicSequence

    @property
    def scale_sq(self) -> tuple[Fraction, ...]:
        return tuple(1 / v for v in self.base.norms_sq)

    def __len__(self) -> int:
        return len(self.base)

    def value_sq(self, n: int, x) -> Fraction:
        v = self.base.poly(n)(as_fraction(x))
        return v * v / self.base.norm_sq(n)

    def leading_sq(self, n: int) -> Fraction:
        return 1 / self.base.norm_sq(n)

    def float_poly(self, n: int) -> list[float]:
        scale = self.base.norm_sq(n) ** -0.5
        return [float(c) * scale for c in self.base.poly(n).coeffs]


def monic_sequence(form: BilinearForm, n_max: int, require_positive: bool = True) -> MonicSequence:
    """Generate s_0..s_{n_max} by LDL^T of the monomial Gram matrix.

    The rows of L^{-1} are the monic coefficient vectors and the pivots are
    the squared norms. With require_positive, the first nonpositive pivot
    raises NotPositiveDefinite(n); without it, only a zero pivot (loss of
    quasi-definiteness) is fatal.
    """
    g = gram_matrix(form, n_max)
    L, D = ldlt(g)
    if require_positive:
        for k, d in enumerate(D):
            if d <= 0:
                raise NotPositiveDefinite(k, d)
    inv = unit_lower_inverse(L)
    polys = tuple(Poly(inv[n][: n + 1]) for n in range(n_max + 1))
    return MonicSequence(polys, tuple(D), form)


@dataclass(frozen=True)
class JacobiMatrix:
    """Monic three-term recurrence data: x s_n = s_{n+1} + b_n s_n + lam_n s_{n-1}."""

    b: tuple[Fraction, ...]  # b_0 .. b_m
    lam: tuple[Fraction, ...]  # lam_1 .. lam_m (lam[k-1] = lam_k)

    @property
    def size(self) -> int:
        return len(self.b)

    def monic_banded(self) -> BandedOperator:
        n = self.size

        def fn(i, j):
            if j == i + 1:
                return Fraction(1)
            if j == i:
                return self.b[i]
            if j == i - 1:
                return self.lam[i - 1]
            return Fraction(0)

        return BandedOperator.from_fn(n, 1, 1, fn)

    def offdiag_sq(self, n: int) -> Fraction:
        """Squared orthonormal offdiagonal entry: a_n^2 = lam_{n+1}."""
        return self.lam[n]

    def orthonormal_entry(self, i: int, j: int) -> SignedSquare:
        if i == j:
            v = self.b[i]
            return SignedSquare(v * v, (v > 0) - (v < 0))
        lo, hi = min(i, j), max(i, j)
        if hi == lo + 1:
            v = self.lam[lo]
            return SignedSquare(v, (v > 0) - (v < 0))
        return SignedSquare(Fraction(0), 0)


def jacobi_matrix(seq: MonicSequence) -> JacobiMatrix:
    """Extract the monic TTRR exactly, with two independent consistency checks.

    The residual after matching coefficients must be the zero polynomial,
    and the product coefficient must equal the norm ratio
    lam_n = ||s_n||^2 / ||s_{n-1}||^2.
    """
    m = len(seq) - 1
    if m < 1:
        raise ValueError("need at least two polynomials")
    x = Poly.x()
    b: list[Fraction] = []
    lam: list[Fraction] = []
    for n in range(m):
        t = x * seq.poly(n) - seq.poly(n + 1)
        bn = t.coeff(n)
        r = t - bn * seq.poly(n)
        b.append(bn)
        if n == 0:
            if not r.is_zero:
                raise IdentityViolated(f"three-term residual nonzero at n=0: {r!r}")
            continue
        ln = r.coeff(n - 1)
        if not (r - ln * seq.poly(n - 1)).is_zero:
            raise IdentityViolated(f"three-term residual nonzero at n={n}")
        if ln != seq.norm_sq(n) / seq.norm_sq(n - 1):
            raise IdentityViolated(f"product coefficient disagrees with norm ratio at n={n}")
        lam.append(ln)
    return JacobiMatrix(tuple(b), tuple(lam))


@dataclass(frozen=True)
class BandedRecurrence:
    """Band-(N+1) recurrence of a Sobolev-type sequence under (x-c)^{N+1}.

    raw[n][k]   = B((x-c)^{N+1} s_n, s_k)      (symmetric table)
    monic[n][k] = raw[n][k] / ||s_k||^2        (expansion coefficients)
    """

    raw: BandedOperator
    monic: BandedOperator
    norms_sq: tuple[Fraction, ...]
    c: Fraction
    N: int

    @property
    def size(self) -> int:
        return self.raw.size

    def orthonormal_view(self) -> OrthonormalBandView:
        return OrthonormalBandView(self.raw, self.norms_sq)

    def orthonormal_sq(self, n: int, k: int) -> Fraction:
        v = self.raw.entry(n, k)
        return v * v / (self.norms_sq[n] * self.norms_sq[k])

    def orthonormal_sign(self, n: int, k: int) -> int:
        v = self.raw.entry(n, k)
        return (v > 0) - (v < 0)


def banded_recurrence(seq: MonicSequence, c, N: int) -> BandedRecurrence:
    """Build the recurrence table for multiplication by (x-c)^{N+1}.

    Entries with |n-k| > N+1 are asserted to vanish (this is exactly the
    symmetry of the multiplication operator for the generating form);
    the monic expansion is re-verified polynomially on rows unaffected by
    truncation.
    """
    c = as_fraction(c)
    size = len(seq)
    form = seq.form
    shift = Poly((-c, Fraction(1))) ** (N + 1)
    shifted = [shift * seq.poly(n) for n in range(size)]
    rows = [[Fraction(0)] * size for _ in range(size)]
    for n in range(size):
        for k in range(size):
            v = form(shifted[n], seq.poly(k))
            if abs(n - k) > N + 1:
                # above the band this vanishes by plain orthogonality; below
                # it vanishes only when multiplication by the shift is
                # symmetric for the form, so this is the real test
                if v != 0:
                    raise SymmetryViolated(
                        f"entry ({n},{k}) = {v} outside band {N + 1}; "
                        "multiplication by the shift is not symmetric for this form"
                    )
            else:
                rows[n][k] = v
    raw = BandedOperator(size, N + 1, N + 1, rows)
    monic = BandedOperator.from_fn(
        size, N + 1, N + 1, lambda n, k: raw.entry(n, k) / seq.norm_sq(k)
    )
    # polynomial re-verification of the expansion on trusted rows
    for n in range(size - (N + 1)):
        acc = Poly()
        for k in range(max(0, n - N - 1), min(size, n + N + 2)):
            acc = acc + monic.entry(n, k) * seq.poly(k)
        if acc != shifted[n]:
            raise IdentityViolated(f"banded expansion failed at row {n}")
    return BandedRecurrence(raw, monic, seq.norms_sq, c, N)


def reference_abc(n: int) -> tuple[Fraction, Fraction, Fraction]:
    """Closed-form recurrence coefficients (a_n^2, b_n^2, c_n) for the
    half-line weight e^{-x} with unit mass on f'(0)g'(0).

    a_n and b_n are returned squared (their closed forms live under a
    square root); c_n is rational outright.
    """
    a_sq = Fraction(
        (2 * n**2 + 7 * n + 9) * (2 * n**2 - 5 * n + 6) * (n + 4) * (n + 2) * (n + 1) ** 3,
        (2 * n**2 + 3 * n + 4) * (2 * n**2 - n + 3) * (n + 3),
    )
    b_sq = Fraction(
        16
        * (4 * n**7 + 16 * n**6 + 13 * n**5 + 10 * n**4 + 43 * n**3 + 64 * n**2 + 84 * n + 36) ** 2
        * (n + 1),
        (2 * n**2 + 3 * n + 4)
        * (2 * n**2 - n + 3) ** 2
        * (2 * n**2 - 5 * n + 6)
        * (n + 3)
        * (n + 2) ** 2,
    )
    c = Fraction(
        2 * (12 * n**8 + 12 * n**7 - 23 * n**6 + 57 * n**5 + 82 * n**4 - 81 * n**3 + 37 * n**2 + 120 * n + 36),
        (2 * n**2 - n + 3) * (2 * n**2 - 5 * n + 6) * (n + 2) * (n + 1),
    )
    return a_sq, b_sq, c


@dataclass(frozen=True)
class ConnectionMatrix:
    """Banded change of basis: s_n = sum_j T_monic[n][j] p_j.

    from_norms_sq are the s-norms under the s-form, to_norms_sq the
    p-norms under the p-form; both feed the orthonormal squared view
    T_orth[n][j]^2 = T_monic[n][j]^2 * d_j / nu_n.
    """

    T_monic: BandedOperator
    from_norms_sq: tuple[Fraction, ...]
    to_norms_sq: tuple[Fraction, ...]
    N: int

    @property
    def size(self) -> int:
        return self.T_monic.size

    def orthonormal_sq(self, n: int, j: int) -> Fraction:
        v = self.T_monic.entry(n, j)
        return v * v * self.to_norms_sq[j] / self.from_norms_sq[n]

    def orthonormal_sign(self, n: int, j: int) -> int:
        v = self.T_monic.entry(n, j)
        return (v > 0) - (v < 0)

    def orthonormal_entry(self, n: int, j: int) -> SignedSquare:
        return SignedSquare(self.orthonormal_sq(n, j), self.orthonormal_sign(n, j))


def connection_matrix(
    seq_from: MonicSequence,
    seq_to: MonicSequence,
    N: int,
) -> ConnectionMatrix:
    """Connection coefficients of seq_from in the seq_to basis.

    Entries are computed from inner products under seq_to's own form (the
    one that makes it orthogonal) and then cross-validated by
    reconstructing seq_from polynomially - two genuinely different routes
    to the same numbers. Entries below the (N+1)-th subdiagonal must
    vanish.
    """
    form_to = seq_to.form
    size = min(len(seq_from), len(seq_to))
    rows = [[Fraction(0)] * size for _ in range(size)]
    for n in range(size):
        for j in range(size):
            if j > n:
                break
            v = form_to(seq_from.poly(n), seq_to.poly(j)) / seq_to.norm_sq(j)
            if j < n - (N + 1):
                if v != 0:
                    raise BandViolation(f"connection entry ({n},{j}) = {v} below band {N + 1}")
                continue
            rows[n][j] = v
        recon = Poly()
        for j in range(max(0, n - N - 1), n + 1):
            recon = recon + rows[n][j] * seq_to.poly(j)
        if recon != seq_from.poly(n):
            raise IdentityViolated(f"basis expansion disagrees with inner products at row {n}")
    T = BandedOperator(size, N + 1, 0, rows)
    return ConnectionMatrix(T, seq_from.norms_sq, seq_to.norms_sq, N)
