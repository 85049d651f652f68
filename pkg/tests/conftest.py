"""Shared session fixtures: the worked family, its Christoffel shift,
folded matrix sequences, and the factorization-identity grid."""

from __future__ import annotations

import json
from fractions import Fraction

import pytest

import opfold as op
from opfold.cli import main


def moment_count(degree: int, N: int) -> int:
    # the band recurrence pairs (x-c)^{N+1} s_n with s_n, so the form needs
    # moments through twice the top degree plus the band width, with margin
    return 2 * (degree + N + 2) + 2


def mass_last_derivative(N: int) -> op.Matrix:
    return op.Matrix.rational(
        [[1 if i == N and j == N else 0 for j in range(N + 1)] for i in range(N + 1)]
    )


@pytest.fixture(scope="session")
def canon():
    """Laguerre weight, derivative mass at the origin: the worked example.

    Degrees through 25 give 13 folded blocks and 23 trusted band rows,
    enough for every tabulated comparison in the suite.
    """
    deg = 25
    mu = op.laguerre_moments(0, moment_count(deg, 1))
    c = Fraction(0)
    M = op.Matrix.rational([[0, 0], [0, 1]])
    form = op.sobolev_form(op.SobolevSpec(mu, c, 1, M))
    seq = op.monic_sequence(form, deg)
    rec = op.banded_recurrence(seq, c, 1)
    shifted = op.monic_sequence(
        op.measure_form(op.christoffel_shift(mu, c, 2)), deg
    )
    base = op.monic_sequence(op.measure_form(mu), deg)
    fold = op.build_matrix_sequence(seq, 1)
    qfold = op.build_matrix_sequence(shifted, 1)
    return {
        "mu": mu,
        "form": form,
        "seq": seq,
        "rec": rec,
        "shifted": shifted,
        "base": base,
        "fold": fold,
        "qfold": qfold,
    }


@pytest.fixture(scope="session")
def block_pipeline(canon):
    """Monic block Jacobi of the folded family, its LU/UL swap, and the
    independently generated block Jacobi of the shifted fold."""
    P = op.monic_normalize(canon["fold"]).sequence
    blockJ = op.matrix_ttrr(P).monic
    lu = op.block_lu(blockJ)
    swap = op.darboux_swap(lu)
    Q = op.monic_normalize(canon["qfold"]).sequence
    blockJQ = op.matrix_ttrr(Q).monic
    return {
        "P": P,
        "Q": Q,
        "blockJ": blockJ,
        "lu": lu,
        "swap": swap,
        "blockJQ": blockJQ,
    }


@pytest.fixture(scope="session")
def hermite():
    """Symmetrized Gaussian family folded at N=1, with the classical
    second-order operator acting on it."""
    deg = 13
    mu = op.hermite_moments(moment_count(deg, 1))
    seq = op.monic_sequence(op.measure_form(mu), deg)
    fold = op.build_matrix_sequence(seq, 1)
    D = op.ScalarOperator(2, (op.Poly(()), op.Poly((0, -2)), op.Poly((1,))))
    return {"mu": mu, "seq": seq, "fold": fold, "D": D}


@pytest.fixture(scope="session")
def verify_paper(tmp_path_factory):
    """One full built-in verification run with CSV tables, shared by the
    command line and acceptance tests."""
    out = tmp_path_factory.mktemp("verify_paper")
    rc = main(["verify-paper", "--out", str(out), "--format", "csv"])
    report = json.loads((out / "report.json").read_text())
    return {"exit": rc, "dir": out, "report": report}


@pytest.fixture(scope="session")
def theorem_grid():
    """Factorization identities over alpha in {0,1,2}, c in {0,1},
    N in {1,2}, sized so trusted rows cover indices 0..20."""
    results = []
    for alpha in (0, 1, 2):
        for cnum in (0, 1):
            for N in (1, 2):
                deg = 20 + N + 2
                mu = op.laguerre_moments(alpha, moment_count(deg, N))
                c = Fraction(cnum)
                form = op.sobolev_form(
                    op.SobolevSpec(mu, c, N, mass_last_derivative(N))
                )
                seq = op.monic_sequence(form, deg)
                rec = op.banded_recurrence(seq, c, N)
                fact = op.band_symmetric_factorize(
                    rec.raw, N + 1, require_positive=False
                )
                hrep = op.verify_h_factorization(rec, fact)
                shifted = op.monic_sequence(
                    op.measure_form(op.christoffel_shift(mu, c, N + 1)),
                    deg,
                    require_positive=False,
                )
                conn = op.connection_matrix(seq, shifted, N)
                jac = op.jacobi_matrix(shifted)
                ul_T = op.verify_ul_identity(jac, c, N, conn)
                base = op.monic_sequence(op.measure_form(mu), deg)
                conn0 = op.connection_matrix(base, shifted, N)
                ul_C = op.verify_ul_identity(jac, c, N, conn0)
                results.append(
                    {
                        "alpha": alpha,
                        "c": c,
                        "N": N,
                        "seq": seq,
                        "rec": rec,
                        "fact": fact,
                        "hrep": hrep,
                        "jac": jac,
                        "conn": conn,
                        "conn0": conn0,
                        "ul_T": ul_T,
                        "ul_C": ul_C,
                    }
                )
    return results
