"""Moment functionals, bilinear forms, and the multiplication-symmetry test."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import opfold as op
import oracles

small_poly = st.lists(
    st.fractions(min_value=-8, max_value=8, max_denominator=6),
    min_size=1,
    max_size=5,
)


def test_gamma_weight_moments_match_direct_integrals():
    mu0 = op.laguerre_moments(0, 8)
    mu2 = op.laguerre_moments(2, 6)
    for k in range(6):
        assert mu0.moment(k) == oracles.laguerre_moment_integral(0, k)
    for k in range(4):
        assert mu2.moment(k) == oracles.laguerre_moment_integral(2, k)


def test_gamma_weight_moments_match_closed_form():
    mu = op.laguerre_moments(1, 30)
    for k in range(30):
        assert mu.moment(k) == oracles.laguerre_moment(1, k)


def test_gaussian_moments_match_direct_integrals():
    mu = op.hermite_moments(10)
    for k in range(9):
        assert mu.moment(k) == oracles.hermite_moment_integral(k)


def test_gaussian_moments_match_closed_form():
    mu = op.hermite_moments(40)
    assert mu.moment(0) == 1
    for k in range(40):
        assert mu.moment(k) == oracles.hermite_moment(k)


def test_moment_access_beyond_table_raises():
    mu = op.laguerre_moments(0, 5)
    with pytest.raises(op.InsufficientMoments):
        mu.moment(5)


@given(
    st.fractions(min_value=-3, max_value=3, max_denominator=4),
    st.integers(min_value=1, max_value=3),
)
@settings(max_examples=25)
def test_shifted_functional_matches_expansion_oracle(c, power):
    mu = op.laguerre_moments(0, 16)
    shifted = op.christoffel_shift(mu, c, power)
    for k in range(16 - power):
        want = oracles.shifted_moment(lambda j: mu.moment(j), c, power, k)
        assert shifted.moment(k) == want


def test_shifted_functional_needs_enough_moments():
    mu = op.laguerre_moments(0, 3)
    with pytest.raises(op.InsufficientMoments):
        op.christoffel_shift(mu, 0, 3)


@given(small_poly, small_poly)
@settings(max_examples=30)
def test_plain_measure_pairing_matches_oracle(a, b):
    mu = op.laguerre_moments(0, 12)
    form = op.measure_form(mu)
    f, g = op.Poly(a), op.Poly(b)
    want = oracles.bilinear(
        lambda k: mu.moment(k), Fraction(0), [[Fraction(0)]],
        oracles.poly_to_sympy(f), oracles.poly_to_sympy(g),
    )
    assert form(f, g) == want


@given(small_poly, small_poly)
@settings(max_examples=30)
def test_derivative_mass_pairing_matches_oracle(a, b):
    mu = op.laguerre_moments(0, 14)
    M = op.Matrix.rational([[0, 0], [0, 1]])
    form = op.sobolev_form(op.SobolevSpec(mu, Fraction(0), 1, M))
    f, g = op.Poly(a), op.Poly(b)
    M_rows = [[Fraction(0), Fraction(0)], [Fraction(0), Fraction(1)]]
    want = oracles.bilinear(
        lambda k: mu.moment(k), Fraction(0), M_rows,
        oracles.poly_to_sympy(f), oracles.poly_to_sympy(g),
    )
    assert form(f, g) == want


@given(small_poly, small_poly)
@settings(max_examples=20)
def test_higher_order_mass_at_shifted_point_matches_oracle(a, b):
    mu = op.laguerre_moments(1, 14)
    M = op.Matrix.rational([[1, 0, 0], [0, 0, 0], [0, 0, 2]])
    c = Fraction(1)
    form = op.sobolev_form(op.SobolevSpec(mu, c, 2, M))
    f, g = op.Poly(a), op.Poly(b)
    M_rows = [
        [Fraction(1), Fraction(0), Fraction(0)],
        [Fraction(0), Fraction(0), Fraction(0)],
        [Fraction(0), Fraction(0), Fraction(2)],
    ]
    want = oracles.bilinear(
        lambda k: mu.moment(k), c, M_rows,
        oracles.poly_to_sympy(f), oracles.poly_to_sympy(g),
    )
    assert form(f, g) == want


def test_mass_matrix_validation():
    mu = op.laguerre_moments(0, 10)
    bad_shape = op.Matrix.rational([[1]])
    with pytest.raises(op.ConfigError):
        op.SobolevSpec(mu, Fraction(0), 1, bad_shape)
    asym = op.Matrix.rational([[0, 1], [0, 0]])
    with pytest.raises(op.ConfigError):
        op.SobolevSpec(mu, Fraction(0), 1, asym)
    indefinite = op.Matrix.rational([[0, 0], [0, -1]])
    with pytest.raises(op.ConfigError):
        op.SobolevSpec(mu, Fraction(0), 1, indefinite)
    psd_offdiag = op.Matrix.rational([[1, 1], [1, 1]])
    op.SobolevSpec(mu, Fraction(0), 1, psd_offdiag)


def test_gram_matrix_matches_oracle_and_is_symmetric(canon):
    form = canon["form"]
    g = op.gram_matrix(form, 6)
    assert g == g.transpose()
    mu = canon["mu"]
    M_rows = [[Fraction(0), Fraction(0)], [Fraction(0), Fraction(1)]]
    for i in range(7):
        for j in range(7):
            want = oracles.bilinear(
                lambda k: mu.moment(k), Fraction(0), M_rows,
                oracles.X**i, oracles.X**j,
            )
            assert g.rows[i][j] == want


def test_hankel_positivity_matches_determinant_oracle():
    mu = op.laguerre_moments(0, 20)
    assert mu.hankel_positive_through(8) is None
    for n in range(5):
        assert oracles.hankel_minor(list(mu.moments), n) > 0

    shifted = op.christoffel_shift(op.laguerre_moments(0, 20), Fraction(1), 3)
    flagged = shifted.hankel_positive_through(6)
    assert flagged is not None
    minors = [oracles.hankel_minor(list(shifted.moments), n) for n in range(7)]
    first_bad = next(n for n, d in enumerate(minors) if d <= 0)
    assert flagged == first_bad


def test_multiplication_symmetry_holds_with_mass_at_shift_point():
    for cnum in (0, 1):
        for N in (1, 2):
            mu = op.laguerre_moments(0, 2 * (12 + N + 2) + 4)
            M = op.Matrix.rational(
                [
                    [1 if i == j else 0 for j in range(N + 1)]
                    for i in range(N + 1)
                ]
            )
            form = op.sobolev_form(op.SobolevSpec(mu, Fraction(cnum), N, M))
            report = op.symmetry_check(form, N, 12, c=Fraction(cnum))
            assert report.ok and report.counterexample is None


def test_multiplication_symmetry_fails_off_the_mass_point():
    N = 1
    mu = op.laguerre_moments(0, 2 * (12 + N + 2) + 4)
    M = op.Matrix.rational([[0, 0], [0, 1]])
    form = op.sobolev_form(op.SobolevSpec(mu, Fraction(0), N, M))
    report = op.symmetry_check(form, N, 12, c=Fraction(1))
    assert not report.ok
    i, j = report.counterexample
    assert report.lhs != report.rhs
    assert 0 <= i <= 12 and 0 <= j <= 12
