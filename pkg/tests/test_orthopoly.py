"""Monic sequences, recurrence extraction, and connection coefficients,
each checked against an independent Gram-Schmidt oracle."""

from fractions import Fraction

import pytest
import sympy as sp

import opfold as op
import oracles


def sobolev_pair(alpha, c, M_rows, count=40):
    mu = op.laguerre_moments(alpha, count)
    return lambda f, g: oracles.bilinear(lambda k: mu.moment(k), c, M_rows, f, g)


CANON_M = [[Fraction(0), Fraction(0)], [Fraction(0), Fraction(1)]]


def test_worked_family_matches_gram_schmidt_oracle(canon):
    pair = sobolev_pair(0, Fraction(0), CANON_M)
    polys, norms = oracles.monic_gram_schmidt(pair, 8)
    seq = canon["seq"]
    for n in range(9):
        assert [c for c in seq.poly(n).coeffs] == oracles.sympy_to_coeffs(polys[n])
        assert seq.norm_sq(n) == norms[n]
    assert seq.poly(1) == op.Poly((-1, 1))


def test_shifted_family_matches_gram_schmidt_oracle(canon):
    pair = sobolev_pair(2, Fraction(0), [[Fraction(0)]])
    polys, norms = oracles.monic_gram_schmidt(pair, 6)
    shifted = canon["shifted"]
    for n in range(7):
        assert [c for c in shifted.poly(n).coeffs] == oracles.sympy_to_coeffs(polys[n])
        assert shifted.norm_sq(n) == norms[n]
    assert shifted.poly(1) == op.Poly((-3, 1))


def test_orthogonality_and_monicity(canon):
    seq, form = canon["seq"], canon["form"]
    for n in range(13):
        assert seq.poly(n).leading == 1
        assert seq.poly(n).degree == n
    for n in range(10):
        for m in range(n):
            assert form(seq.poly(n), seq.poly(m)) == 0
    assert seq.is_positive


def test_classical_three_term_coefficients():
    mu = op.laguerre_moments(0, 20)
    seq = op.monic_sequence(op.measure_form(mu), 7)
    jac = op.jacobi_matrix(seq)
    for n in range(6):
        assert jac.b[n] == 2 * n + 1
    for k in range(5):
        assert jac.lam[k] == (k + 1) ** 2


def test_shifted_three_term_spots(canon):
    jac = op.jacobi_matrix(canon["shifted"])
    assert jac.b[0] == 3
    assert jac.lam[0] == 3
    assert jac.offdiag_sq(0) == 3


def test_three_term_needs_two_polynomials():
    mu = op.laguerre_moments(0, 8)
    seq = op.monic_sequence(op.measure_form(mu), 0)
    with pytest.raises(ValueError):
        op.jacobi_matrix(seq)


def test_indefinite_functional_is_flagged_or_admitted():
    # odd shift power with the point inside the support: sign-changing weight
    shifted = op.christoffel_shift(op.laguerre_moments(0, 24), Fraction(1), 3)
    form = op.measure_form(shifted)
    with pytest.raises(op.NotPositiveDefinite):
        op.monic_sequence(form, 6)
    seq = op.monic_sequence(form, 6, require_positive=False)
    assert not seq.is_positive
    assert all(seq.norm_sq(n) != 0 for n in range(7))
    for n in range(7):
        assert seq.poly(n).leading == 1


def test_band_recurrence_spots_match_direct_pairings(canon):
    rec = canon["rec"]
    pair = sobolev_pair(0, Fraction(0), CANON_M)
    polys, norms = oracles.monic_gram_schmidt(pair, 4)
    x2 = oracles.X**2
    for k in range(3):
        raw = pair(x2 * polys[0], polys[k])
        assert rec.raw.entry(0, k) == raw
    assert rec.raw.entry(0, 0) / rec.norms_sq[0] == 2
    assert rec.orthonormal_sq(0, 1) == 8
    assert rec.orthonormal_sq(0, 2) == 12


def test_band_recurrence_structure(canon):
    rec = canon["rec"]
    assert rec.raw.lower == 2 and rec.raw.upper == 2
    assert rec.raw.entry(0, 3) == 0 and rec.raw.entry(3, 0) == 0
    assert rec.orthonormal_view().symmetric_in_squares()
    trusted = rec.size - 3
    for n in range(trusted):
        assert rec.orthonormal_sq(n, n + 2) != 0


def test_closed_form_coefficients_match_oracle_for_small_index(canon):
    rec = canon["rec"]
    for n in range(6):
        a2, b2, cdiag = op.reference_abc(n)
        assert rec.orthonormal_sq(n, n + 2) == a2
        assert rec.orthonormal_sq(n, n + 1) == b2
        assert rec.raw.entry(n, n) / rec.norms_sq[n] == cdiag
    assert op.reference_abc(0) == (Fraction(12), Fraction(8), Fraction(2))


def test_connection_spots_match_pairing_oracle(canon):
    conn = op.connection_matrix(canon["seq"], canon["shifted"], 1)
    pair_s = sobolev_pair(0, Fraction(0), CANON_M)
    pair_p = sobolev_pair(2, Fraction(0), [[Fraction(0)]])
    s_polys, s_norms = oracles.monic_gram_schmidt(pair_s, 3)
    p_polys, p_norms = oracles.monic_gram_schmidt(pair_p, 3)
    for n in range(3):
        inner = pair_p(s_polys[n], p_polys[0])
        assert conn.orthonormal_sq(n, 0) == inner * inner / (s_norms[n] * p_norms[0])
    assert conn.orthonormal_sq(0, 0) == 2
    assert conn.orthonormal_sq(1, 0) == 4
    assert conn.orthonormal_sq(2, 0) == 6


def test_connection_reconstructs_the_expanded_family(canon):
    conn = op.connection_matrix(canon["seq"], canon["shifted"], 1)
    seq, shifted = canon["seq"], canon["shifted"]
    for n in range(9):
        total = op.Poly(())
        for j in range(max(0, n - 2), n + 1):
            total = total + conn.T_monic.entry(n, j) * shifted.poly(j)
        assert total == seq.poly(n)


def test_connection_band_is_enforced(canon):
    with pytest.raises(op.BandViolation):
        op.connection_matrix(canon["seq"], canon["shifted"], 0)
