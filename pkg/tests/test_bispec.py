"""Differential-operator layer: the tabulated order-8 operator, exact
eigen verification, nullspace-based discovery, minimal-order certificates,
the scalar route, and the root-of-unity conjugation check."""

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

import opfold as op
from opfold.bispec import exact_nullspace

import oracles


# -- tabulated operator and ladder ----------------------------------------


def test_reference_operator_shape_and_low_coefficients():
    ref, lad = op.reference_operator()
    assert ref.order == 8
    assert ref.size == 2
    d0 = ref.coeffs[0]
    assert d0[0, 0] == op.Poly(())
    assert d0[0, 1] == op.Poly(())
    assert d0[1, 0] == op.Poly.constant(Fraction(-3))
    assert d0[1, 1] == op.Poly.constant(Fraction(3))
    assert lad(0).rows == ((Fraction(0), Fraction(0)), (Fraction(0), Fraction(3)))
    assert lad(1).rows == ((Fraction(9), Fraction(0)), (Fraction(0), Fraction(27)))


def test_ladder_diagonal_carries_both_scalar_families():
    _, lad = op.reference_operator()
    for n in range(12):
        m = lad(n)
        assert m[0, 0] == op.reference_scalar_ladder(2 * n)
        assert m[1, 1] == op.reference_scalar_ladder(2 * n + 1)
        assert m[0, 1] == 0 and m[1, 0] == 0


def test_eigen_identity_on_folded_blocks(canon):
    ref, lad = op.reference_operator()
    rep = op.verify_eigen(canon["fold"], ref, lad, range(9))
    assert rep.ok
    assert rep.first_failure is None
    assert all(good for _, good in rep.results)


def test_eigen_identity_spot_rows(canon):
    # block 0 row 1 is the constant row (-1, 1) and maps to 3 times itself;
    # block 1 row 0 is (y, -2) and maps to 9 times itself
    fold = canon["fold"]
    ref, _ = op.reference_operator()
    m0, m1 = fold.mat(0), fold.mat(1)
    assert [m0[1, 0], m0[1, 1]] == [op.Poly((-1,)), op.Poly((1,))]
    assert [m1[0, 0], m1[0, 1]] == [op.Poly((0, 1)), op.Poly((-2,))]
    img0 = op.apply_right(m0, ref)
    img1 = op.apply_right(m1, ref)
    three = op.Poly.constant(Fraction(3))
    nine = op.Poly.constant(Fraction(9))
    assert [img0[1, 0], img0[1, 1]] == [three * m0[1, 0], three * m0[1, 1]]
    assert [img1[0, 0], img1[0, 1]] == [nine * m1[0, 0], nine * m1[0, 1]]


def test_eigen_check_localizes_a_perturbed_coefficient(canon):
    ref, lad = op.reference_operator()
    bumped = list(ref.coeffs)
    d3 = [[bumped[3][i, j] for j in range(2)] for i in range(2)]
    d3[0][0] = d3[0][0] + op.Poly.constant(Fraction(1))
    bumped[3] = op.Matrix(d3)
    broken = op.RightDifferentialOperator(8, tuple(bumped))
    rep = op.verify_eigen(canon["fold"], broken, lad, range(6))
    assert not rep.ok
    assert rep.first_failure is not None
    assert rep.residual


def test_eigen_check_localizes_a_perturbed_eigenvalue(canon):
    ref, lad = op.reference_operator()

    def skewed(n):
        m = lad(n)
        if n == 3:
            return op.Matrix(
                [[m[0, 0] + 1, Fraction(0)], [Fraction(0), m[1, 1]]]
            )
        return m

    bad = op.EigenvalueLadder(skewed, 2)
    assert op.verify_eigen(canon["fold"], ref, bad, range(3)).ok
    rep = op.verify_eigen(canon["fold"], ref, bad, range(6))
    assert not rep.ok
    assert rep.first_failure == 3
    assert rep.results[3] == (3, False)


def test_zero_operator_with_zero_ladder_passes(canon):
    zero = op.Matrix([[op.Poly(()), op.Poly(())], [op.Poly(()), op.Poly(())]])
    zop = op.RightDifferentialOperator(0, (zero,))
    zlad = op.EigenvalueLadder(
        lambda n: op.Matrix.rational([[0, 0], [0, 0]]), 2
    )
    assert op.verify_eigen(canon["fold"], zop, zlad, range(4)).ok


def test_operator_and_ladder_guards():
    zero = op.Matrix([[op.Poly(()), op.Poly(())], [op.Poly(()), op.Poly(())]])
    with pytest.raises(op.IdentityViolated):
        op.RightDifferentialOperator(1, (zero, zero))
    with pytest.raises(op.DimensionMismatch):
        op.RightDifferentialOperator(2, (zero,))
    skew = op.EigenvalueLadder(
        lambda n: op.Matrix.rational([[0, 1], [0, 0]]), 2
    )
    with pytest.raises(op.IdentityViolated):
        skew(0)
    with pytest.raises(op.DimensionMismatch):
        op.apply_right(op.Matrix([[op.Poly((1,))]]), op.reference_operator()[0])


# -- exact nullspace -------------------------------------------------------


@given(
    st.integers(1, 5),
    st.integers(1, 5),
    st.data(),
)
@settings(max_examples=60, deadline=None)
def test_nullspace_matches_sympy(nr, nc, data):
    rows = [
        [data.draw(st.integers(-9, 9)) for _ in range(nc)] for _ in range(nr)
    ]
    basis = exact_nullspace(rows, nc)
    smat = sp.Matrix(rows)
    assert len(basis) == nc - smat.rank()
    for vec in basis:
        assert all(
            sum(Fraction(rows[i][j]) * vec[j] for j in range(nc)) == 0
            for i in range(nr)
        )
    if basis:
        assert oracles.nullspace_dim([list(v) for v in basis]) == 0 or sp.Matrix(
            [list(map(sp.Rational, map(str, v))) for v in basis]
        ).rank() == len(basis)


def test_nullspace_of_no_constraints_is_full():
    basis = exact_nullspace([], 3)
    assert len(basis) == 3
    assert exact_nullspace([[0, 0, 0]], 3) == basis


# -- discovery -------------------------------------------------------------


def test_discovery_recovers_the_classical_fold_operator(hermite):
    # ladder diag(-4n, -2(2n+1)) is the fold of the first-derivative
    # eigenvalues -2m split by parity
    lad = op.EigenvalueLadder(
        lambda n: op.Matrix.rational([[-4 * n, 0], [0, -2 * (2 * n + 1)]]), 2
    )
    res = op.discover_operator(hermite["fold"], lad, 2, 1, 6)
    got = res.operator
    assert got.order == 2
    assert res.hom_dim == 0
    assert res.column_dims == (0, 0)
    expect = [
        op.Matrix([[op.Poly(()), op.Poly(())], [op.Poly(()), op.Poly((-2,))]]),
        op.Matrix(
            [[op.Poly((2, -4)), op.Poly(())], [op.Poly(()), op.Poly((6, -4))]]
        ),
        op.Matrix(
            [[op.Poly((0, 4)), op.Poly(())], [op.Poly(()), op.Poly((0, 4))]]
        ),
    ]
    for k in range(3):
        for i in range(2):
            for j in range(2):
                assert got.coeffs[k][i, j] == expect[k][i, j], (k, i, j)
    assert op.verify_eigen(hermite["fold"], got, lad, range(7)).ok


def test_discovery_rejects_an_infeasible_order(hermite):
    lad = op.EigenvalueLadder(
        lambda n: op.Matrix.rational([[-4 * n, 0], [0, -2 * (2 * n + 1)]]), 2
    )
    with pytest.raises(op.Infeasible):
        op.discover_operator(hermite["fold"], lad, 1, 0, 6)


def test_discovery_flags_an_underdetermined_window(hermite):
    lad = op.EigenvalueLadder(
        lambda n: op.Matrix.rational([[-4 * n, 0], [0, -2 * (2 * n + 1)]]), 2
    )
    with pytest.raises(op.Underdetermined):
        op.discover_operator(hermite["fold"], lad, 2, 1, 1)


# -- minimal order ---------------------------------------------------------


def test_min_order_certificate_for_the_fold(hermite):
    res = op.min_order_check(hermite["fold"], 4, 2, 6)
    assert res.min_order == 2
    assert res.feasible == (False, False, True, True, True)
    assert res.section_dims == (2, 2, 4, 4, 6)
    assert res.witness is not None and res.witness.order == 2
    wl = res.witness_ladder
    # the witness ladder must genuinely vary with n
    assert len({wl[n] for n in range(7)}) > 1
    wrapped = op.EigenvalueLadder(
        lambda n: op.Matrix.rational([[wl[n][0], 0], [0, wl[n][1]]]), 2
    )
    assert op.verify_eigen(hermite["fold"], res.witness, wrapped, range(7)).ok


# -- scalar route ----------------------------------------------------------


def test_scalar_discovery_matches_the_tabulated_coefficients(canon):
    D = op.discover_scalar(canon["seq"], op.reference_scalar_ladder, 8, 16)
    assert D.coeffs[0] == op.Poly(())
    assert D.coeffs[1] == op.Poly((-3, 3))
    assert D.coeffs[2] == op.Poly((-3, -3, Fraction(3, 2)))
    assert D.coeffs[8] == op.Poly((0, 0, 0, 0, Fraction(1, 4)))


def test_scalar_eigenvalues_match_the_quartic_ladder(canon):
    D = op.discover_scalar(canon["seq"], op.reference_scalar_ladder, 8, 16)
    lams = op.scalar_eigenvalues(D, canon["seq"], 11)
    assert lams == tuple(op.reference_scalar_ladder(m) for m in range(11))
    s4 = canon["seq"].poly(4)
    assert op.apply_scalar(D, s4) == op.Poly.constant(lams[4]) * s4


def test_scalar_discovery_on_the_gaussian_family(hermite):
    D = op.discover_scalar(hermite["seq"], lambda m: Fraction(-2 * m), 2, 6)
    assert D.coeffs == (op.Poly(()), op.Poly((0, -2)), op.Poly((1,)))
    assert D.coeffs == hermite["D"].coeffs


def test_scalar_eigenvalue_extraction_rejects_non_eigenfunctions(canon):
    ddx = op.ScalarOperator(1, (op.Poly(()), op.Poly((1,))))
    with pytest.raises(op.IdentityViolated):
        op.scalar_eigenvalues(ddx, canon["seq"], 5)


def test_scalar_operator_guards():
    with pytest.raises(op.DimensionMismatch):
        op.ScalarOperator(2, (op.Poly((1,)),))
    with pytest.raises(op.IdentityViolated):
        op.ScalarOperator(1, (op.Poly((1,)), op.Poly(())))


# -- conjugation -----------------------------------------------------------


def test_cyclotomic_polynomials_match_sympy():
    for n in range(1, 31):
        assert oracles.poly_to_sympy(op.cyclotomic_poly(n)) == sp.expand(
            sp.cyclotomic_poly(n, oracles.X)
        )


def test_root_of_unity_change_of_basis_is_unitary():
    for N in range(1, 6):
        data = op.FoldConjugationData(N)
        assert data.step == N + 1
        assert data.check_b_unitary()
        assert data.exponent(2, 3) == (6 % (N + 1))


def test_float_roots_agree_between_precisions():
    for N in (1, 2, 4):
        data = op.FoldConjugationData(N)
        wd = data.w_float("double")
        we = data.w_float("extended")
        assert abs(complex(we.real, we.imag) - wd) < 1e-14
        assert abs(wd ** data.step - 1) < 1e-12


def test_conjugated_operator_matches_the_block_action(canon, hermite):
    D8 = op.discover_scalar(canon["seq"], op.reference_scalar_ladder, 8, 16)
    r = op.conjugation_eval(D8, 1, canon["seq"], 1, Fraction(1, 2))
    assert r.max_deviation < 1e-12
    for y0 in (Fraction(1, 2), Fraction(3)):
        for n in range(4):
            rh = op.conjugation_eval(hermite["D"], 1, hermite["seq"], n, y0)
            assert rh.max_deviation < 1e-12, (y0, n)


def test_conjugation_extended_precision_tightens_the_residual(canon):
    D8 = op.discover_scalar(canon["seq"], op.reference_scalar_ladder, 8, 16)
    r = op.conjugation_eval(
        D8, 1, canon["seq"], 1, Fraction(1, 2), precision="extended"
    )
    assert float(r.max_deviation) < 1e-40


def test_conjugation_requires_a_positive_point(canon):
    D8 = op.ScalarOperator(1, (op.Poly(()), op.Poly((0, 1))))
    with pytest.raises(op.NumericalInstability):
        op.conjugation_eval(D8, 1, canon["seq"], 1, Fraction(-1))
    with pytest.raises(op.NumericalInstability):
        op.conjugation_eval(D8, 1, canon["seq"], 1, Fraction(0))


# -- serialization ---------------------------------------------------------


def test_operator_json_round_trip():
    import json

    ref, _ = op.reference_operator()
    data = json.loads(json.dumps(op.operator_to_json(ref)))
    assert op.operator_from_json(data) == ref
