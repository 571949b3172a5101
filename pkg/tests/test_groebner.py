import random

from hypothesis import given, settings
from hypothesis import strategies as st

from mfext import PolyMatrix, Ring
from mfext.groebner import groebner_basis, lift_solve, module_kernel, normal_form, preimage, vec

S = Ring(("x", "y"))
x, y = S.gens()


def ideal_gb(gens, ring=S):
    return [g.comps[0] for g in groebner_basis(list(gens), 1, ring)]


def nf(p, gens, ring=S):
    return normal_form(p, groebner_basis(list(gens), 1, ring)).comps[0]


def test_principal_ideals():
    assert ideal_gb([x]) == [x]
    f = 3 * x**2 + y**3
    assert ideal_gb([f]) == [f.monic()]


def test_reduced_basis_of_two_generators():
    # xy - 1 = y(x - y) + (y^2 - 1) drops out of the reduced basis
    assert set(ideal_gb([x * y - 1, y**2 - 1])) == {y**2 - 1, x - y}


def test_normal_forms():
    L = Ring(("x", "y"), order="lex")
    assert nf(L("x^2"), [L("x^2 + y^3")], L) == L("-y^3")
    # under grevlex y^3 leads, so x^2 is already reduced
    assert nf(x**2, [x**2 + y**3]) == x**2
    p = x**3 - 2 * y
    assert normal_form(p, groebner_basis([], 1, S)).comps[0] == p
    assert nf(x**2 + y**3, [x**2 + y**3]).is_zero()


def test_lift_examples():
    A = PolyMatrix.from_rows(S, [[x, y], [-(y**2), x]])
    assert tuple(lift_solve(A, vec(S, [x**2 + y**3, 0]))) == (x, y**2)
    c = lift_solve(A, vec(S, A.column(1)))
    assert A * PolyMatrix.from_columns(S, [tuple(c)], 2) == PolyMatrix.from_columns(S, [A.column(1)], 2)
    assert lift_solve(PolyMatrix.from_rows(S, [[y]]), vec(S, [1])) is None


def test_lift_modulo():
    # 1 = x * (-1) + (x + 1) lifts through (x) modulo x + 1
    c = lift_solve(PolyMatrix.from_rows(S, [[x]]), vec(S, [1]), [x + 1])
    assert c is not None
    assert nf(x * c[0] - 1, [x + 1]).is_zero()


def test_kernels():
    assert [tuple(k) for k in module_kernel(PolyMatrix.from_rows(S, [[x, y]]))] == [(y, -x)]
    assert module_kernel(PolyMatrix.identity(S, 3)) == []
    assert module_kernel(PolyMatrix.from_rows(S, [[x, y], [-(y**2), x]])) == []
    # over S/(x) multiplication by y has zero kernel, by x everything is killed
    assert module_kernel(PolyMatrix.from_rows(S, [[y]]), [x]) == []
    assert module_kernel(PolyMatrix.from_rows(S, [[x]]), [x]) != []


def test_preimage_matches_kernel_of_augmented_matrix():
    F = PolyMatrix.from_rows(S, [[x, y]])
    B = PolyMatrix.from_rows(S, [[x * y]])
    pre = preimage(F, B)
    # (y, 0) maps to xy, (0, x) maps to xy, (y, -x) maps to 0
    for v in ([y, 0], [0, x], [y, -x]):
        col = PolyMatrix.from_columns(S, [v], 2)
        assert lift_solve(PolyMatrix.from_columns(S, [tuple(p) for p in pre], 2), vec(S, v)) is not None
        assert lift_solve(B, vec(S, (F * col).column(0))) is not None
    assert lift_solve(PolyMatrix.from_columns(S, [tuple(p) for p in pre], 2), vec(S, [1, 0])) is None


small = st.lists(
    st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-3, 3)),
    min_size=1,
    max_size=4,
).map(lambda ts: sum((S.monomial((a, b), c) for a, b, c in ts), S.zero()))


@settings(max_examples=25, deadline=None)
@given(st.lists(small, min_size=1, max_size=3), st.randoms(use_true_random=False))
def test_basis_is_canonical_under_shuffle(gens, rnd):
    gens = [g for g in gens if not g.is_zero()]
    shuffled = list(gens)
    rnd.shuffle(shuffled)
    scaled = [g * 2 for g in shuffled]
    assert ideal_gb(gens) == ideal_gb(shuffled) == ideal_gb(scaled)


@settings(max_examples=25, deadline=None)
@given(st.lists(small, min_size=1, max_size=3), small, small)
def test_members_reduce_to_zero(gens, a, b):
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return
    member = a * gens[0] + b * gens[-1]
    assert nf(member, gens).is_zero()


def test_module_basis_in_rank_two():
    rng = random.Random(5)
    cols = [(x + rng.randint(1, 3) * y, y**2), (x * y, x)]
    gb = groebner_basis([vec(S, c) for c in cols], 2, S)
    for c in cols:
        assert normal_form(vec(S, c), gb).is_zero()
    assert not normal_form(vec(S, (1, 0)), gb).is_zero()
