import pytest

from instances import S, f1, f2, one, phi_layers, trivial_layers, x
from mfext import BallCertificate, Generator, MatrixFactorization, ModuleMorphism, PolyMatrix, PresentedModule, cert_verify, identity_certificate, theorem0_certify
from mfext.ball import (
    ADDITIVE,
    CLOSED,
    CertificateError,
    Leaf,
    cert_direct_sum,
    cert_raise,
    lemma4_cert_scale,
    lemma5_rewrite,
    report_verify,
)
from mfext.catalog import phi, psi
from mfext.star import FilteredModule, Layer

A, B = phi(S, 2, 1), psi(S, 2, 1)
M = PresentedModule(A, (f1,))
G = Generator(M, B)
E2 = PolyMatrix.identity(S, 2)


def leaf(block, target, inj, proj, gen=G, mode=CLOSED):
    whole = gen.blocks_sum((block,))
    return BallCertificate(mode, 1, target, gen, Leaf((block,), ModuleMorphism(target, whole, inj), ModuleMorphism(whole, target, proj)))


def inputs(fm):
    return [(layer.mf(), 0, identity_certificate(Generator(layer.mf().module(), layer.B))) for layer in fm.layers]


def test_identity_certificate():
    c = identity_certificate(G)
    assert cert_verify(c)
    assert cert_verify(c, generator=M, target=M)
    assert not cert_verify(c, target=PresentedModule(B, (f1,)))


def test_broken_split_maps_rejected():
    c = leaf(0, M, E2, PolyMatrix.scalar(S, 2, 2))
    detail = []
    assert not cert_verify(c, detail=detail)
    assert detail


def test_mode_conformance():
    omega = PresentedModule(B, (f1,))
    c = leaf(1, omega, E2, E2)
    assert cert_verify(c)
    # a syzygy block is a closed-mode building block only
    assert not cert_verify(leaf(1, omega, E2, E2, mode=ADDITIVE))
    ring = leaf("R", PresentedModule.free(S, 1, (f1,)), one(1), one(1))
    assert cert_verify(ring)
    assert not cert_verify(ring, mode=ADDITIVE)


def test_raise_and_sum():
    c = identity_certificate(G)
    up = cert_raise(c, 3)
    assert up.level == 3 and cert_verify(up)
    both = cert_direct_sum(c, up)
    assert both.level == 3 and cert_verify(both)
    with pytest.raises(CertificateError):
        cert_raise(up, 2)


def test_lemma5_rewrites_leaves():
    mf = MatrixFactorization(f1, A, B)
    omega = PresentedModule(B, (f1,))
    out = lemma5_rewrite(leaf(3, omega, E2, E2), mf)
    assert out.mode == ADDITIVE and cert_verify(out)
    # the Omega^3 block lands on the mate coordinates of M + S/(f) + Omega M
    assert out.body.inj.matrix.submatrix(range(3, 5), range(2)) == E2
    assert out.body.blocks == (0,)

    out0 = lemma5_rewrite(identity_certificate(G), mf)
    assert out0.body.inj.matrix.submatrix(range(2), range(2)) == E2
    R = PresentedModule.free(S, 1, (f1,))
    outR = lemma5_rewrite(leaf("R", R, one(1), one(1)), mf)
    assert outR.body.inj.matrix == PolyMatrix.from_rows(S, [[0], [0], [1], [0], [0]])


def test_lemma4_scale_level_one():
    c = lemma4_cert_scale(identity_certificate(Generator(M)), B, x)
    assert c.level == 1 and cert_verify(c)
    assert c.target == M.scaled(x)
    omega = PresentedModule(B, (f1,))
    c = lemma4_cert_scale(leaf(1, omega, E2, E2), B, x)
    assert c.target == omega.scaled(x) and cert_verify(c)


def test_lemma4_scale_extension():
    up = cert_raise(identity_certificate(Generator(PresentedModule(one(f2), (f2,)), one(1))), 2)
    scaled = lemma4_cert_scale(up, one(1), f1)
    assert scaled.level == 2 and cert_verify(scaled)
    assert scaled.target.ideal == (f1 * f2,)


def test_theorem0_single_layer():
    fm = FilteredModule([f1], [Layer(f1, A, B)])
    rep = theorem0_certify(fm, inputs(fm))
    assert rep.level == 1 and rep.certificate.mode == ADDITIVE
    assert report_verify(rep)


@pytest.mark.parametrize("fm", [trivial_layers([f1, f2]), phi_layers(E2)], ids=["trivial", "phi"])
def test_theorem0_two_layers(fm):
    rep = theorem0_certify(fm, inputs(fm))
    assert rep.level == 2 and rep.radius_bound == 1
    assert cert_verify(rep.certificate, generator=rep.generator, target=fm.module())
    assert "radius <= 1" in rep.statement()


def test_theorem0_rejects_wrong_inputs():
    fm = trivial_layers([f1, f2])
    bad = inputs(fm)
    bad[0] = (bad[1][0], 0, bad[0][2])
    with pytest.raises(CertificateError):
        theorem0_certify(fm, bad)
