from mfext import GF, ExactSequenceClaim, ModuleMorphism, PolyMatrix, PresentedModule, Ring
from mfext.groebner import groebner_basis
from mfext.oracle import gb_hilbert_function, is_homogeneous, macaulay_hilbert_function, truncated_exact_check

R = Ring(("x", "y"), GF(101))
x, y = R.gens()


def test_hilbert_function_of_monomial_ideal():
    # S/(x^2, xy): 1, 2, 1, 1, 1, ...
    gens = [x**2, x * y]
    expected = [1, 2, 1, 1, 1, 1]
    assert macaulay_hilbert_function(gens, 5, 101) == expected
    assert gb_hilbert_function(groebner_basis(gens, 1, R), 5) == expected


def test_hilbert_function_of_complete_intersection():
    # two generic quadrics: 1, 2, 1, 0, ...
    gens = [x**2 + 3 * x * y, y**2 - x * y]
    assert macaulay_hilbert_function(gens, 4, 101) == [1, 2, 1, 0, 0]
    assert gb_hilbert_function(groebner_basis(gens, 1, R), 4) == [1, 2, 1, 0, 0]


def test_homogeneity():
    assert is_homogeneous(x**2 + x * y)
    assert not is_homogeneous(x**2 + y)
    assert is_homogeneous(R.zero())


def test_truncated_check_detects_non_surjective_end():
    Sx = PresentedModule.cyclic(R, [x])
    Sx2 = PresentedModule.cyclic(R, [x**2])
    one = PolyMatrix.from_rows(R, [[1]])
    # S/(x) -> S/(x^2) -> S/(x) with the quotient map replaced by multiplication by y
    claim = ExactSequenceClaim.short(
        ModuleMorphism(Sx, Sx2, PolyMatrix.from_rows(R, [[x]])), ModuleMorphism(Sx2, Sx, one * y)
    )
    detail = []
    assert not truncated_exact_check(claim, 6, 101, detail=detail)
    assert detail
