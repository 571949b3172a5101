"""Matrix factorizations (f, A, B) with AB = BA = f*E and their calculus."""

from __future__ import annotations

from dataclasses import dataclass

from .groebner import groebner_basis, lift_matrix, module_kernel, normal_form
from .modules import (
    ExactSequenceClaim,
    ModuleMorphism,
    PresentedModule,
    direct_sum,
    exact_check,
    summand_check,
)
from .poly import PolyMatrix, Polynomial, ShapeMismatch

__all__ = [
    "MatrixFactorization",
    "SummandWitness",
    "NotSquare",
    "KernelNonzero",
    "NotAnnihilated",
    "InvalidMF",
    "mf_verify",
    "mf_from_presentation",
    "mf_syzygy",
    "mf_periodicity_check",
    "mf_direct_sum",
    "mf_scale",
    "lemma4_summand_scale",
]


class NotSquare(ValueError):
    pass


class KernelNonzero(ValueError):
    pass


class NotAnnihilated(ValueError):
    pass


class InvalidMF(ValueError):
    pass


@dataclass(frozen=True)
class MatrixFactorization:
    f: Polynomial
    A: PolyMatrix
    B: PolyMatrix

    def __post_init__(self):
        if self.A.rows != self.A.cols or self.B.shape != self.A.shape:
            raise ShapeMismatch(f"matrix factorization needs equal square matrices, got {self.A.shape} and {self.B.shape}")
        if self.A.ring != self.f.ring or self.B.ring != self.f.ring:
            raise ValueError("matrix factorization data over different rings")

    @property
    def ring(self):
        return self.f.ring

    @property
    def size(self) -> int:
        return self.A.rows

    def module(self) -> PresentedModule:
        """Cok A over S/(f)."""
        return PresentedModule(self.A, (self.f,))

    def mate_module(self) -> PresentedModule:
        """Cok B over S/(f), the canonical syzygy of Cok A."""
        return PresentedModule(self.B, (self.f,))

    def transpose(self) -> "MatrixFactorization":
        return MatrixFactorization(self.f, self.A.T, self.B.T)


@dataclass(frozen=True)
class SummandWitness:
    """inj: N -> E and proj: E -> N with proj o inj = id_N."""

    inj: ModuleMorphism
    proj: ModuleMorphism

    @property
    def part(self) -> PresentedModule:
        return self.inj.source

    @property
    def whole(self) -> PresentedModule:
        return self.inj.target

    def check(self) -> bool:
        return summand_check(self.inj, self.proj)

    def then(self, outer: "SummandWitness") -> "SummandWitness":
        """Compose N -> E (self) with E -> E' (outer)."""
        return SummandWitness(self.inj.then(outer.inj), outer.proj.then(self.proj))


def mf_verify(mf: MatrixFactorization) -> bool:
    if mf.A.rows != mf.A.cols or mf.A.shape != mf.B.shape:
        raise ShapeMismatch("matrix factorization needs equal square matrices")
    if mf.f.is_zero():
        return False
    fE = PolyMatrix.scalar(mf.ring, mf.size, mf.f)
    return mf.A * mf.B == fE and mf.B * mf.A == fE


def mf_from_presentation(A: PolyMatrix, f) -> MatrixFactorization:
    """Build the mate B column by column from lifts of f*e_i through A."""
    f = A.ring(f)
    if A.rows != A.cols:
        raise NotSquare(f"presentation is {A.rows}x{A.cols}")
    if f.is_zero():
        raise ValueError("f must be nonzero")
    if module_kernel(A):
        raise KernelNonzero("Ker A is nonzero")
    B = lift_matrix(A, PolyMatrix.scalar(A.ring, A.rows, f))
    if B is None:
        raise NotAnnihilated("f does not annihilate Cok A")
    mf = MatrixFactorization(f, A, B)
    assert B * A == PolyMatrix.scalar(A.ring, A.rows, f), "BA = fE must follow from AB = fE and Ker A = 0"
    return mf


def mf_syzygy(mf: MatrixFactorization) -> MatrixFactorization:
    return MatrixFactorization(mf.f, mf.B, mf.A)


def periodic_claims(mf: MatrixFactorization):
    """One period of the 2-periodic complex over S/(f), its dual, and the two syzygy sequences."""
    ring, n, f = mf.ring, mf.size, mf.f
    F = PresentedModule.free(ring, n, (f,))
    claims = {}
    for label, (A, B) in (("complex", (mf.A, mf.B)), ("dual", (mf.A.T, mf.B.T))):
        maps = (ModuleMorphism(F, F, B), ModuleMorphism(F, F, A), ModuleMorphism(F, F, B))
        claims[label] = ExactSequenceClaim((F, F, F, F), maps)
    for label, (A, B) in (("syzygy", (mf.A, mf.B)), ("syzygy-of-mate", (mf.B, mf.A))):
        M = PresentedModule(A, (f,))
        omega = PresentedModule(B, (f,))
        claims[label] = ExactSequenceClaim.short(
            ModuleMorphism(omega, F, A), ModuleMorphism(F, M, PolyMatrix.identity(ring, n))
        )
    return claims


def mf_periodicity_check(mf: MatrixFactorization) -> bool:
    """Exactness of ...-B->-A->-B-> over S/(f) and of its transpose, plus Omega^2 Cok A = Cok A."""
    if not mf_verify(mf):
        raise InvalidMF("AB = BA = fE fails")
    for claim in periodic_claims(mf).values():
        if not exact_check(claim):
            return False
    return mf_syzygy(mf_syzygy(mf)) == mf


def mf_direct_sum(a: MatrixFactorization, b: MatrixFactorization) -> MatrixFactorization:
    if a.f != b.f:
        raise ValueError("direct sum of factorizations of different elements")
    ring = a.ring
    return MatrixFactorization(a.f, PolyMatrix.block_diag(ring, [a.A, b.A]), PolyMatrix.block_diag(ring, [a.B, b.B]))


def mf_scale(A: PolyMatrix, x, y) -> PresentedModule:
    """Cok(xA) as a module over S/(xy), given y*Cok A = 0."""
    x, y = A.ring(x), A.ring(y)
    if x.is_zero():
        raise ValueError("scaling element must be nonzero")
    if not PresentedModule(A).annihilated_by(y):
        raise NotAnnihilated("y does not annihilate Cok A")
    scaled = PresentedModule(A * x)
    assert scaled.annihilated_by(x * y)
    return PresentedModule(A * x, (x * y,))


def _is_identity_witness(n: ModuleMorphism, e: ModuleMorphism) -> bool:
    if n.source != n.target:
        return False
    E = PolyMatrix.identity(n.source.ring, n.source.ngens)
    return n.matrix == E and e.matrix == E


def lemma4_summand_scale(n: ModuleMorphism, e: ModuleMorphism, x) -> tuple:
    """From N = Cok B a summand of M = Cok A (via n, e), make Cok(xB) a summand of Cok(xA) + (S/(x))^k.

    Returns ``(SummandWitness, k)``.  Modules over S/I become modules over
    S/(xI).  The complement of N is presented by [A | n]; the pullback
    splittings are the matrices Phi = [e; E] and Psi = [n | E - ne], and the
    resulting change of basis on F0 + G0 is T = [[E, Psi], [-Phi, E - Phi Psi]].
    """
    if not summand_check(n, e):
        raise ValueError("input summand witness is invalid")
    N, M = n.source, n.target
    ring = N.ring
    x = ring(x)
    if x.is_zero():
        raise ValueError("scaling element must be nonzero")
    Nx, Mx = N.scaled(x), M.scaled(x)
    if _is_identity_witness(n, e):
        ident = ModuleMorphism.identity(Nx)
        return SummandWitness(ident, ident), 0

    mA, mB = M.ngens, N.ngens
    k = mA + mB
    Nm, Em = n.matrix, e.matrix
    E_A = PolyMatrix.identity(ring, mA)
    E_k = PolyMatrix.identity(ring, k)
    Phi = PolyMatrix.vstack(ring, [Em, E_A], cols=mA)  # G0 <- F0
    Psi = PolyMatrix.hstack(ring, [Nm, E_A - Nm * Em], rows=mA)  # F0 <- G0
    T = PolyMatrix.block(ring, [[E_A, Psi], [-Phi, E_k - Phi * Psi]], [mA, k], [mA, k])
    Tinv = PolyMatrix.block(ring, [[E_A - Psi * Phi, -Psi], [Phi, E_k]], [mA, k], [mA, k])
    iota = PolyMatrix.vstack(ring, [PolyMatrix.identity(ring, mB), PolyMatrix(ring, mA, mB)], cols=mB)
    pi = iota.T
    inj = Tinv * PolyMatrix.vstack(ring, [PolyMatrix(ring, mA, mB), iota], cols=mB)
    proj = PolyMatrix.hstack(ring, [PolyMatrix(ring, mB, mA), pi], rows=mB) * T

    # drop copies of S/(x) whose injection row vanishes mod x
    keep = list(range(mA))
    for j in range(k):
        row = inj.row(mA + j)
        if any(not _divisible(a, x) for a in row):
            keep.append(mA + j)
    k_used = len(keep) - mA
    inj = inj.submatrix(keep, range(mB))
    proj = proj.submatrix(range(mB), keep)
    free = PresentedModule(PolyMatrix.scalar(ring, k_used, x), Mx.ideal)
    whole = direct_sum([Mx, free], Mx.ideal) if k_used else Mx
    wit = SummandWitness(ModuleMorphism(Nx, whole, inj), ModuleMorphism(whole, Nx, proj))
    if not wit.check():
        raise AssertionError("scaled summand witness failed verification")
    return wit, k_used


def _divisible(a: Polynomial, x: Polynomial) -> bool:
    if a.is_zero():
        return True
    if x.is_constant():
        return True
    return normal_form(a, groebner_basis([x], 1)).is_zero()
