import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mfext import MatrixFactorization, ModuleMorphism, PolyMatrix, PresentedModule, Ring, mf_periodicity_check, mf_verify
from mfext.catalog import phi, psi
from mfext.matfac import (
    InvalidMF,
    KernelNonzero,
    NotAnnihilated,
    NotSquare,
    lemma4_summand_scale,
    mf_direct_sum,
    mf_from_presentation,
    mf_scale,
    mf_syzygy,
)
from mfext.modules import direct_sum, summand_check

S = Ring(("x", "y"))
x, y = S.gens()
f1 = x**2 + y**3
f2 = x**2 + y**5
phi1, psi1 = phi(S, 2, 1), psi(S, 2, 1)


def one(p):
    return PolyMatrix.from_rows(S, [[p]])


def test_verify_examples():
    assert mf_verify(MatrixFactorization(f1, one(f1), one(1)))
    assert mf_verify(MatrixFactorization(f1, phi1, psi1))
    # phi1^2 has off-diagonal entries 2xy
    assert not mf_verify(MatrixFactorization(f1, phi1, phi1))


def test_from_presentation():
    assert mf_from_presentation(one(f1), f1).B == one(1)
    assert mf_from_presentation(phi1, f1).B == psi1
    with pytest.raises(NotAnnihilated):
        mf_from_presentation(one(y), x)
    with pytest.raises(NotSquare):
        mf_from_presentation(PolyMatrix.from_rows(S, [[x, y]]), x)
    with pytest.raises(KernelNonzero):
        mf_from_presentation(PolyMatrix.from_rows(S, [[x, y], [x, y]]), x)


def test_syzygy_swaps():
    triv = MatrixFactorization(f1, one(f1), one(1))
    assert mf_syzygy(triv) == MatrixFactorization(f1, one(1), one(f1))
    assert mf_syzygy(MatrixFactorization(f1, phi1, psi1)) == MatrixFactorization(f1, psi1, phi1)


def test_periodicity():
    assert mf_periodicity_check(MatrixFactorization(f1, one(f1), one(1)))
    assert mf_periodicity_check(MatrixFactorization(f1, phi1, psi1))
    with pytest.raises(InvalidMF):
        mf_periodicity_check(MatrixFactorization(f1, phi1, phi1))


def test_direct_sum():
    a = MatrixFactorization(f1, phi1, psi1)
    empty = MatrixFactorization(f1, PolyMatrix(S, 0, 0), PolyMatrix(S, 0, 0))
    assert mf_direct_sum(a, empty) == a
    triv = MatrixFactorization(f1, one(f1), one(1))
    s = mf_direct_sum(triv, triv)
    assert s.A == PolyMatrix.scalar(S, 2, f1) and mf_verify(s)


def test_scale():
    assert mf_scale(one(f2), f1, f2) == PresentedModule(one(f1 * f2), (f1 * f2,))
    M = mf_scale(phi(S, 4, 1), f1, f2)
    assert M.ideal == (f1 * f2,) and M.annihilated_by(f1 * f2)
    assert mf_scale(phi1, 1, f1).presentation == phi1
    with pytest.raises(NotAnnihilated):
        mf_scale(one(x), 1, y)


def test_lemma4_cases():
    N = PresentedModule(phi1, (f1,))
    ident = ModuleMorphism.identity(N)
    wit, k = lemma4_summand_scale(ident, ident, x)
    assert k == 0 and wit.check() and wit.part.presentation == phi1 * x

    # zero module is a summand of anything
    zero = PresentedModule(PolyMatrix.identity(S, 1), (f1,))
    wit, _ = lemma4_summand_scale(ModuleMorphism.zero(zero, N), ModuleMorphism.zero(N, zero), x)
    assert wit.check()

    # Cok B inside Cok B + Cok C
    B, C = PresentedModule(one(f1), (f1,)), PresentedModule(phi1, (f1,))
    M = direct_sum([B, C])
    inj = ModuleMorphism(B, M, PolyMatrix.from_rows(S, [[1], [0], [0]]))
    proj = ModuleMorphism(M, B, PolyMatrix.from_rows(S, [[1, 0, 0]]))
    assert summand_check(inj, proj)
    wit, k = lemma4_summand_scale(inj, proj, y)
    assert wit.check()
    assert wit.part == B.scaled(y)
    assert wit.whole.ngens == M.ngens + k


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 6), st.data())
def test_a_series_factorizations(m, data):
    j = data.draw(st.integers(1, m))
    f = x**2 + y ** (m + 1)
    mf = MatrixFactorization(f, phi(S, m, j), psi(S, m, j))
    assert mf_verify(mf) and mf_verify(mf.transpose())
    assert mf_from_presentation(mf.A, f).B == mf.B
