from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from dhl_omega import tables
from dhl_omega.functionals import ConstraintError, SieveParams, omega_value
from dhl_omega.optimizer import (
    DependentBasisError,
    QuadraticFormPair,
    assemble,
    cholesky,
    dhl,
    jacobi_eigh,
    min_rayleigh,
    optimize,
    rho_of,
    witness_report,
)
from dhl_omega.poly import Poly

H = Fraction(1, 2)
Q4 = Fraction(1, 4)


def _pair(A, B):
    A = np.asarray(A, dtype=float)
    n = len(A)
    return QuadraticFormPair([Poly([1])] * n, A, np.zeros((n, n)), [[None] * n] * n,
                             [[Fraction(x) for x in row] for row in B], Fraction(0))


def test_assemble_constant():
    pair = assemble(SieveParams.standard(2, H), [Poly([1])])
    assert pair.A_exact[0][0] == Fraction(4, 3)
    assert pair.B == [[Fraction(1, 2)]]
    assert pair.quotient([1.0]) == pytest.approx(14 / 3, abs=1e-14)


def test_assemble_cross_term():
    pair = assemble(SieveParams.standard(2, H), [Poly([1]), Poly([1, -1])])
    assert pair.B[0][1] == pair.B[1][0] == Fraction(1, 6)


def test_quotient_matches_omega():
    p = SieveParams.standard(3, Q4)
    basis = [Poly([0] * j + [1], shift=1) for j in range(3)]
    pair = assemble(p, basis)
    x = [2.0, -1.0, 0.5]
    f = Poly([2, -1, Fraction(1, 2)], shift=1)
    assert pair.quotient(x) == pytest.approx(omega_value(p, f).numeric, rel=1e-12)


def test_diagonal():
    r = min_rayleigh(_pair([[2, 0], [0, 3]], [[1, 0], [0, 1]]))
    assert r.value == pytest.approx(2.0, abs=1e-14)
    assert np.allclose(r.coeffs, [1, 0])


def test_identity_quotient():
    B = [[2, 1], [1, 3]]
    assert min_rayleigh(_pair(B, B)).value == pytest.approx(1.0, abs=1e-13)


def test_dependent_basis():
    with pytest.raises(DependentBasisError):
        min_rayleigh(_pair([[1, 1], [1, 1]], [[1, 1], [1, 1]]))


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 6), st.integers(0, 10 ** 6))
def test_jacobi_matches_scipy(n, seed):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(n, n))
    S = M + M.T
    w, V = jacobi_eigh(S)
    assert np.allclose(w, scipy.linalg.eigh(S, eigvals_only=True), atol=1e-11)
    assert np.allclose(S @ V, V * w, atol=1e-10)
    P = M @ M.T + n * np.eye(n)
    assert np.allclose(cholesky(P), np.linalg.cholesky(P), atol=1e-12)


def test_degree_zero():
    rep = optimize(SieveParams.standard(2, H), 0)
    assert rep.bound == pytest.approx(14 / 3, abs=1e-13)


def test_dominance_over_witness():
    p = SieveParams.standard(4, H)
    witness = Poly.parse("1,15,-1,19@1-x")
    rep = optimize(p, 3)
    assert rep.bound <= omega_value(p, witness).numeric + 1e-9
    assert rep.bound <= 9.00542
    assert rep.residual <= 1e-10 * 1e3


def test_dominance_tables():
    for cell in tables.table_G(ks=(3, 5, 7)):
        k = cell.k
        eps = Fraction(cell.column.split("=")[1])
        f = Poly.parse(cell.witness.replace(f"@{1 + eps}-x", "@1+eps-x"), eps=eps)
        rep = optimize(SieveParams.epsilon(k, Q4, eps), f.degree)
        assert rep.bound <= cell.computed + 1e-9


def test_table_g_examples():
    assert optimize(SieveParams.epsilon(7, Q4, Fraction(1, 9)), 2).bound <= 21.9939
    assert optimize(SieveParams.epsilon(8, Q4, Fraction(1, 10)), 2).bound <= 25.9038
    assert optimize(SieveParams.epsilon(10, Q4, Fraction(2, 21)), 3).bound <= 33.9384


def test_scan_picks_best():
    base = SieveParams.epsilon(5, Q4, Fraction(1, 6))
    grid = [Fraction(1, 8), Fraction(1, 6), Fraction(1, 5)]
    best = optimize(base, 2, scan=grid)
    each = [optimize(SieveParams.epsilon(5, Q4, e), 2).bound for e in grid]
    assert best.bound == min(each)
    with pytest.raises(ConstraintError):
        optimize(SieveParams.standard(5, Q4), 2, scan=grid)


def test_deterministic():
    p = SieveParams.epsilon(4, Q4, Fraction(1, 5))
    a, b = optimize(p, 2), optimize(p, 2)
    assert a.as_dict() == b.as_dict()


def test_rho_and_dhl():
    assert rho_of(22.0) == 22
    assert rho_of(21.9939) == 21
    rep = witness_report(SieveParams.extended(4, H), Poly.parse("12,63,100@1-x"))
    s = dhl(rep)
    assert (s.k, s.rho, s.assumption) == (4, 8, "GEH")
    rep7 = optimize(SieveParams.epsilon(7, Q4, Fraction(1, 9)), 2)
    assert str(dhl(rep7)) == "DHL_Omega[7; 21] (unconditional)"
    with pytest.raises(ValueError):
        rho_of(float("inf"))


@given(st.floats(0, 100), st.floats(0, 100))
def test_rho_monotone(a, b):
    lo, hi = sorted((a, b))
    assert rho_of(lo) <= rho_of(hi)
