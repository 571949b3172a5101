import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from instances import S, f1, f2, one, phi_layers, random_block, trivial_layers, x, y
from mfext import FilteredModule, Layer, ModuleMorphism, PolyMatrix, PresentedModule, compute_filtration, exact_check, iso_check, lemma3_sequence, reduce_C, star_reassociate
from mfext.catalog import phi, psi
from mfext.modules import direct_sum
from mfext.star import assemble_presentation, build_C


def test_assemble():
    fm = trivial_layers([f1, f2])
    assert assemble_presentation(fm) == PolyMatrix.from_rows(S, [[f1, 1], [0, f2]])
    split = trivial_layers([f1, f2], block_value=0)
    assert assemble_presentation(split) == PolyMatrix.block_diag(S, [one(f1), one(f2)])
    single = FilteredModule([f1], [Layer(f1, phi(S, 2, 1), psi(S, 2, 1))])
    assert assemble_presentation(single) == phi(S, 2, 1)


def test_cokernel_of_trivial_extension_is_cyclic():
    M = trivial_layers([f1, f2]).module()
    R = PresentedModule.cyclic(S, [f1 * f2], (f1 * f2,))
    f = PolyMatrix.from_rows(S, [[-f2, 1]])
    g = PolyMatrix.from_rows(S, [[0], [1]])
    assert iso_check(ModuleMorphism(M, R, f), ModuleMorphism(R, M, g))


def _witness_ok(fm, M):
    f, g = fm.witness
    return f.source == fm.module() and f.target == M and iso_check(f, g)


def test_filtration_of_cyclic_module():
    M = PresentedModule.cyclic(S, [f1 * f2], (f1 * f2,))
    fm = compute_filtration(M, [f1, f2])
    assert [layer.A for layer in fm.layers] == [one(f1), one(f2)]
    # the extension block is a unit (its sign depends on the generator chosen)
    assert fm.block(1, 2) in (one(1), one(-1))
    assert _witness_ok(fm, M)


def test_filtration_of_split_module():
    h = f1 * f2
    M = direct_sum([PresentedModule(one(f1), (h,)), PresentedModule(one(f2), (h,))])
    fm = compute_filtration(M, [f1, f2])
    assert fm.block(1, 2).is_zero()
    assert _witness_ok(fm, M)


def test_filtration_single_layer():
    M = PresentedModule(phi(S, 2, 1), (f1,))
    fm = compute_filtration(M, [f1])
    assert fm.n == 1 and fm.A(1) == phi(S, 2, 1)


def test_build_C_shapes():
    C = build_C(trivial_layers([f1, f2]))
    assert C == PolyMatrix.from_rows(S, [[f1, 0, 1], [0, f1 * f2, f2], [0, 0, f2]])
    C0 = build_C(trivial_layers([f1, f2], 0))
    assert C0[0, 2].is_zero()
    xs = [x, y, x + y]
    C3 = build_C(trivial_layers(xs))
    assert C3.shape == (5, 5)
    assert C3[3, 3] == y * (x + y) and C3[4, 4] == x + y
    assert C3[3, 4].is_zero() and C3[4, 3].is_zero()


def test_reduce_C_exact_and_replayable():
    for fm in (trivial_layers([f1, f2]), trivial_layers([f1, f2], 0), phi_layers(PolyMatrix.identity(S, 2))):
        red = reduce_C(fm)
        assert red.holds()
        assert red.replay() == (red.U, red.V)
        assert red.U * red.U_inverse() == PolyMatrix.identity(S, red.U.rows)


def test_reduce_C_split_log():
    red = reduce_C(trivial_layers([f1, f2], 0))
    assert [(op.kind, op.step) for op in red.log] == [("col", 1), ("row", 4), ("colperm", 7)]


def test_reduce_C_by_hand():
    red = reduce_C(trivial_layers([f1, f2]))
    assert red.U == PolyMatrix.from_rows(S, [[1, 0, 0], [0, 1, 0], [0, -1, 1]])
    assert red.V == PolyMatrix.from_rows(S, [[1, 0, 1], [0, 0, 1], [0, 1, -f1]])
    # the corner is -f1 f2, zero modulo f1 f2
    assert red.U * red.C * red.V == PolyMatrix.from_rows(S, [[f1, 1, 0], [0, f2, 0], [0, 0, -f1 * f2]])


def test_lemma3_single_layer():
    fm = FilteredModule([f1], [Layer(f1, phi(S, 2, 1), psi(S, 2, 1))])
    out = lemma3_sequence(fm)
    assert out.p == 0 and exact_check(out.claim)


def test_lemma3_two_layers():
    out = lemma3_sequence(trivial_layers([f1, f2]))
    assert out.p == 1
    assert out.left.presentation == PolyMatrix.block_diag(S, [one(f1), one(f1 * f2)])
    assert out.right.presentation == one(f2)
    assert exact_check(out.claim)

    out = lemma3_sequence(phi_layers(PolyMatrix.identity(S, 2)))
    assert out.p == 2
    assert out.left_parts[1].presentation == phi(S, 4, 1) * f1
    assert out.right.presentation == PolyMatrix.scalar(S, 2, f2)


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 10_000))
def test_lemma3_random_blocks(seed):
    out = lemma3_sequence(phi_layers(random_block(seed)), check=False)
    assert exact_check(out.claim)


def test_reassociate():
    fm2 = trivial_layers([f1, f2])
    assert star_reassociate(fm2, 1) == fm2
    fm = trivial_layers([x, y, x + y])
    re = star_reassociate(fm, 1, 2)
    assert assemble_presentation(re) == assemble_presentation(fm)
    labels = [label for label, _ in re.claims]
    assert labels[-1].startswith("L=")
    with pytest.raises(ValueError):
        star_reassociate(fm, 2, 2)


def test_reassociate_split():
    fm = trivial_layers([x, y, x + y], 0)
    re = star_reassociate(fm, 1, 2)
    f, _ = dict(re.claims)["L=Cok A[k+1..n]"]
    assert f.target.presentation == PolyMatrix.block_diag(S, [one(y), one(x + y)])
