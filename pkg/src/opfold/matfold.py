"""Folding scalar sequences into matrix orthogonal polynomials.

A scalar polynomial splits along exponent residues mod N+1; stacking the
folds of N+1 consecutive sequence members gives an (N+1)x(N+1) matrix
polynomial in the variable y = x^{N+1}. All matrix inner products reduce
to scalar form evaluations of the underlying polynomials, which keeps
every identity in rational arithmetic. Orthonormal block data is exposed
as squared rationals with signs; a single diagonal +-1 similarity, fixed
from the first block, reconciles sign conventions with the reference
tables.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .banded import BlockTridiagonal
from .errors import (
    DimensionMismatch,
    IdentityViolated,
    InsufficientSequence,
    SingularLeading,
    SingularMatrix,
)
from .linalg import Matrix, inverse
from .measures import BilinearForm
from .orthopoly import BandedRecurrence, MonicSequence
from .poly import Poly
from .rationals import SignedSquare

__all__ = [
    "FoldDecomposition",
    "fold_decompose",
    "MatrixPolySequence",
    "build_matrix_sequence",
    "matrix_gram",
    "MonicNormalization",
    "monic_normalize",
    "BlockTTRRCoeffs",
    "matrix_ttrr",
    "orthonormal_blocks",
    "leading_orthonormal_sq",
    "reference_block_ttrr",
    "reference_leading_sq",
    "similarity_from_block",
    "apply_similarity",
]


@dataclass(frozen=True)
class FoldDecomposition:
    """Components q_0..q_N with s(x) = sum_k x^k q_k(x^{N+1})."""

    parts: tuple[Poly, ...]

    @property
    def N(self) -> int:
        return len(self.parts) - 1

    def reassemble(self) -> Poly:
        step = len(self.parts)
        out = Poly()
        for k, q in enumerate(self.parts):
            lifted = q.stretch(step)
            out = out + Poly.monomial(k) * lifted
        return out


def fold_decompose(s: Poly, N: int) -> FoldDecomposition:
    """Split coefficients by exponent residue mod N+1."""
    step = N + 1
    buckets: list[list[Fraction]] = [[] for _ in range(step)]
    for e in range(s.degree + 1):
        q, r = divmod(e, step)
        bucket = buckets[r]
        while len(bucket) <= q:
            bucket.append(Fraction(0))
        bucket[q] = s.coeff(e)
    return FoldDecomposition(tuple(Poly(b) for b in buckets))


@dataclass(frozen=True)
class MatrixPolySequence:
    """Matrix polynomials in y with exact entries.

    Row j of block n is the fold of scalar number (N+1)n+j; monic means
    every block has identity leading coefficient. The source scalars are
    kept so inner products can be reduced to the scalar form.
    """

    mats: tuple[Matrix, ...]
    N: int
    monic: bool
    scalars: Optional[MonicSequence] = None

    def __len__(self) -> int:
        return len(self.mats)

    @property
    def block_size(self) -> int:
        return self.N + 1

    def mat(self, n: int) -> Matrix:
        if n >= len(self.mats):
            raise InsufficientSequence(
                f"block {n} requested, only {len(self.mats)} built"
            )
        return self.mats[n]

    def leading_coefficient(self, n: int) -> Matrix:
        m = self.mat(n)
        return m.map(lambda e: e.coeff(n))

    def row_scalar(self, n: int, i: int) -> Poly:
        """Reassemble row i of block n into its scalar polynomial."""
        m = self.mat(n)
        return FoldDecomposition(tuple(m[i, j] for j in range(m.ncols))).reassemble()


def build_matrix_sequence(seq: MonicSequence, N: int) -> MatrixPolySequence:
    """Stack folds of N+1 consecutive scalars into matrix blocks.

    Entry (i,j) of block n collects the exponents congruent to j mod N+1
    of scalar (N+1)n+i, so its degree is at most floor(((N+1)n+i-j)/(N+1));
    the bound is asserted.
    """
    step = N + 1
    nblocks = len(seq) // step
    mats = []
    for n in range(nblocks):
        rows = []
        for i in range(step):
            parts = fold_decompose(seq.poly(step * n + i), N).parts
            for j, q in enumerate(parts):
                if q.degree > (step * n + i - j) // step:
                    raise IdentityViolated(
                        f"fold degree bound violated at block {n} entry ({i},{j})"
                    )
            rows.append(parts)
        mats.append(Matrix(rows))
    return MatrixPolySequence(tuple(mats), N, monic=False, scalars=seq)


def matrix_gram(
    R: MatrixPolySequence, n: int, m: int, form: Optional[BilinearForm] = None
) -> Matrix:
    """Block inner product by scalar reduction.

    Entry (i,j) equals the scalar form applied to the reassembled rows;
    no quadrature against the matrix weight is ever performed. Blocks of
    a folded orthogonal sequence are diagonal for n = m and vanish
    otherwise.
    """
    if form is None:
        if R.scalars is None:
            raise DimensionMismatch("no scalar form available for this sequence")
        form = R.scalars.form
    rows_n = [R.row_scalar(n, i) for i in range(R.block_size)]
    rows_m = [R.row_scalar(m, j) for j in range(R.block_size)]
    return Matrix.from_fn(
        R.block_size, R.block_size, lambda i, j: form(rows_n[i], rows_m[j])
    )


@dataclass(frozen=True)
class MonicNormalization:
    """Monic blocks P_n with the leading coefficients that were divided out."""

    sequence: MatrixPolySequence
    leadings: tuple[Matrix, ...]


def monic_normalize(R: MatrixPolySequence) -> MonicNormalization:
    """Left-divide each block by its leading coefficient.

    Folding a degree-graded monic sequence gives lower-triangular leading
    coefficients with unit diagonal entries on the top row pattern; any
    singular leading coefficient raises SingularLeading.
    """
    mats = []
    leadings = []
    ident = Matrix.identity(R.block_size)
    for n in range(len(R)):
        lead = R.leading_coefficient(n)
        try:
            linv = inverse(lead)
        except SingularMatrix as exc:
            raise SingularLeading(f"leading coefficient of block {n} is singular") from exc
        scaled = linv.map(lambda v: Poly.constant(v)) @ R.mat(n)
        if scaled.map(lambda e: e.coeff(n)) != ident:
            raise IdentityViolated(f"block {n} failed to become monic")
        mats.append(scaled)
        leadings.append(lead)
    seq = MatrixPolySequence(tuple(mats), R.N, monic=True, scalars=R.scalars)
    return MonicNormalization(seq, tuple(leadings))


@dataclass(frozen=True)
class BlockTTRRCoeffs:
    """Three-term block recurrence data.

    monic holds the block Jacobi operator (diagonal D_n, subdiagonal C_n,
    identity superdiagonal) extracted with zero residual. A and B hold the
    orthonormal blocks as SignedSquare matrices when scalar data allows.
    """

    monic: Optional[BlockTridiagonal]
    A: tuple[Matrix, ...] = ()
    B: tuple[Matrix, ...] = ()


def matrix_ttrr(
    R: MatrixPolySequence, rec: Optional[BandedRecurrence] = None
) -> BlockTTRRCoeffs:
    """Extract the block recurrence y P_n = P_{n+1} + D_n P_n + C_n P_{n-1}.

    Blocks multiply on the left. Coefficients are peeled degree by degree
    against the monic basis and the remainder must vanish identically;
    anything nonzero raises IdentityViolated. Needs at least two blocks.
    When a scalar recurrence table is supplied the orthonormal blocks are
    attached via orthonormal_blocks.
    """
    if not R.monic:
        raise IdentityViolated("block recurrence extraction expects monic blocks")
    m = len(R)
    if m < 2:
        raise InsufficientSequence("need at least two blocks for a recurrence step")
    y = Poly.x()
    diag = []
    sub = []
    for n in range(m - 1):
        r = R.mat(n).map(lambda e: y * e) - R.mat(n + 1)
        D = r.map(lambda e: e.coeff(n))
        r = r - D.map(lambda v: Poly.constant(v)) @ R.mat(n)
        diag.append(D)
        if n > 0:
            C = r.map(lambda e: e.coeff(n - 1))
            r = r - C.map(lambda v: Poly.constant(v)) @ R.mat(n - 1)
            sub.append(C)
        if not all(r[i, j].is_zero for i in range(r.nrows) for j in range(r.ncols)):
            raise IdentityViolated(f"block recurrence residual nonzero at n={n}")
    ident = Matrix.identity(R.block_size)
    block_j = BlockTridiagonal(
        tuple(diag), tuple(sub), tuple(ident for _ in range(len(diag) - 1))
    )
    if rec is None:
        return BlockTTRRCoeffs(block_j)
    A, B = orthonormal_blocks(rec, R.N)
    return BlockTTRRCoeffs(block_j, A, B)


def orthonormal_blocks(rec: BandedRecurrence, N: int) -> tuple[tuple[Matrix, ...], tuple[Matrix, ...]]:
    """Orthonormal block recurrence entries as SignedSquare matrices.

    With H the raw table of the N+1-st shift power against the scalar
    sequence, {B_n}_{ij} and {A_n}_{ij} are H entries scaled by the two
    squared norms; only squares and signs are rational, so that is what
    is exposed.
    """
    step = N + 1
    nblocks = rec.size // step
    B_list = []
    A_list = []

    def entry(a: int, b: int) -> SignedSquare:
        v = rec.raw.entry(a, b)
        sq = v * v / (rec.norms_sq[a] * rec.norms_sq[b])
        sign = 1 if v > 0 else (-1 if v < 0 else 0)
        return SignedSquare(sq, sign)

    for n in range(nblocks):
        B_list.append(
            Matrix.from_fn(step, step, lambda i, j: entry(step * n + i, step * n + j))
        )
    for n in range(nblocks - 1):
        A_list.append(
            Matrix.from_fn(
                step, step, lambda i, j: entry(step * n + i, step * (n + 1) + j)
            )
        )
    return tuple(A_list), tuple(B_list)


def leading_orthonormal_sq(scalars: MonicSequence, N: int, n: int) -> Matrix:
    """Squared leading coefficient of the orthonormal block, with signs.

    Entry (i,j) of the block-n leading coefficient is the x^{(N+1)n+j}
    coefficient of scalar (N+1)n+i divided by its norm, so the square and
    the sign are rational data.
    """
    step = N + 1
    out = []
    for i in range(step):
        s = scalars.poly(step * n + i)
        nu = scalars.norm_sq(step * n + i)
        row = []
        for j in range(step):
            c = s.coeff(step * n + j)
            sign = 1 if c > 0 else (-1 if c < 0 else 0)
            row.append(SignedSquare(c * c / nu, sign))
        out.append(row)
    return Matrix(out)


def similarity_from_block(computed: Matrix, reference: Matrix) -> tuple[int, ...]:
    """Diagonal +-1 similarity mapping computed signs onto reference signs.

    Fixed from one block: the first diagonal entry is +1 and the rest are
    propagated through the first row. Zero reference entries where the
    computed entry is nonzero (or square mismatches) mean no similarity
    exists and raise IdentityViolated.
    """
    size = computed.nrows
    eps = [0] * size
    eps[0] = 1
    for j in range(1, size):
        comp = computed[0, j]
        ref = reference[0, j]
        if comp.sq != ref.sq:
            raise IdentityViolated(f"squared entry (0,{j}) differs; no sign similarity")
        if comp.sign == 0 or ref.sign == 0:
            raise IdentityViolated(f"entry (0,{j}) vanishes; similarity undetermined")
        eps[j] = comp.sign * ref.sign
    return tuple(eps)


def apply_similarity(block: Matrix, eps: tuple[int, ...]) -> Matrix:
    """Conjugate a SignedSquare matrix by diag(eps); squares are unchanged."""
    return Matrix.from_fn(
        block.nrows,
        block.ncols,
        lambda i, j: SignedSquare(block[i, j].sq, block[i, j].sign * eps[i] * eps[j]),
    )


def _ss(sq: Fraction, sign: int) -> SignedSquare:
    if sq == 0:
        return SignedSquare(Fraction(0), 0)
    return SignedSquare(sq, sign)


def reference_block_ttrr(n: int) -> tuple[Matrix, Matrix]:
    """Tabulated closed forms for the orthonormal blocks (A_n, B_n), N=1.

    Entries carry the tabulated signs; comparisons go through the fixed
    diagonal similarity of similarity_from_block.
    """
    F = Fraction
    a00 = F(
        4 * (8 * n**2 + 14 * n + 9) * (4 * n**2 - 5 * n + 3) * (2 * n + 1) ** 3 * (n + 2) * (n + 1),
        (8 * n**2 - 2 * n + 3) * (4 * n**2 + 3 * n + 2) * (2 * n + 3),
    )
    p10 = (
        256 * n**7
        + 1408 * n**6
        + 3088 * n**5
        + 3640 * n**4
        + 2692 * n**3
        + 1414 * n**2
        + 570 * n
        + 135
    )
    a10 = F(
        16 * p10**2 * (n + 1),
        (8 * n**2 + 14 * n + 9)
        * (8 * n**2 - 2 * n + 3)
        * (4 * n**2 + 3 * n + 2) ** 2
        * (2 * n + 3) ** 2
        * (n + 2),
    )
    a11 = F(
        4 * (8 * n**2 - 2 * n + 3) * (4 * n**2 + 11 * n + 9) * (2 * n + 5) * (2 * n + 3) * (n + 1) ** 3,
        (8 * n**2 + 14 * n + 9) * (4 * n**2 + 3 * n + 2) * (n + 2),
    )
    A = Matrix(
        [
            [_ss(a00, 1), _ss(F(0), 0)],
            [_ss(a10, -1), _ss(a11, 1)],
        ]
    )
    b00 = F(
        2
        * (
            768 * n**8
            + 384 * n**7
            - 368 * n**6
            + 456 * n**5
            + 328 * n**4
            - 162 * n**3
            + 37 * n**2
            + 60 * n
            + 9
        ),
        (8 * n**2 - 2 * n + 3) * (4 * n**2 - 5 * n + 3) * (2 * n + 1) * (n + 1),
    )
    p01 = (
        128 * n**7
        + 256 * n**6
        + 104 * n**5
        + 40 * n**4
        + 86 * n**3
        + 64 * n**2
        + 42 * n
        + 9
    )
    b01 = F(
        16 * p01**2 * (2 * n + 1),
        (8 * n**2 - 2 * n + 3) ** 2
        * (4 * n**2 + 3 * n + 2)
        * (4 * n**2 - 5 * n + 3)
        * (2 * n + 3)
        * (n + 1) ** 2,
    )
    b11 = F(
        2
        * (
            768 * n**8
            + 3456 * n**7
            + 6352 * n**6
            + 6744 * n**5
            + 5128 * n**4
            + 2898 * n**3
            + 1099 * n**2
            + 303 * n
            + 63
        ),
        (8 * n**2 - 2 * n + 3) * (4 * n**2 + 3 * n + 2) * (2 * n + 3) * (n + 1),
    )
    B = Matrix(
        [
            [_ss(b00 * b00, 1 if b00 > 0 else -1), _ss(b01, -1)],
            [_ss(b01, -1), _ss(b11 * b11, 1 if b11 > 0 else -1)],
        ]
    )
    return A, B


def reference_leading_sq(n: int) -> Matrix:
    """Tabulated squared leading coefficient of the orthonormal block, N=1.

    Valid for n >= 2 (factorials of 2n-3 and 2n-4 appear). The tabulated
    sign pattern is [[+,0],[+,-]]; the positive-leading scalar convention
    produces [[+,0],[-,+]], one fixed diagonal similarity apart.
    """
    if n < 2:
        raise InsufficientSequence("closed form needs n >= 2")
    F = Fraction
    f3 = math.factorial(2 * n - 3)
    f4 = math.factorial(2 * n - 4)
    f0 = math.factorial(2 * n)
    e00 = F(
        (4 * n**2 - 5 * n + 3) * (2 * n + 1),
        16 * (8 * n**2 - 2 * n + 3) * (2 * n - 1) ** 2 * (n + 1) * (n - 1) ** 2 * n**2 * f3**2,
    )
    e10 = F(
        (8 * n**3 + 6 * n**2 - 5 * n + 3) ** 2 * (2 * n + 1) ** 2,
        16
        * (8 * n**2 - 2 * n + 3)
        * (4 * n**2 + 3 * n + 2)
        * (2 * n + 3)
        * (2 * n - 1) ** 2
        * (2 * n - 3) ** 2
        * (n + 1)
        * (n - 1) ** 2
        * n**2
        * f4**2,
    )
    e11 = F((8 * n**2 - 2 * n + 3) * (n + 1), (4 * n**2 + 3 * n + 2) * (2 * n + 3) * f0**2)
    return Matrix(
        [
            [_ss(e00, 1), _ss(F(0), 0)],
            [_ss(e10, 1), _ss(e11, -1)],
        ]
    )
