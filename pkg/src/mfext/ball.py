"""Ball-membership certificates for [G]_r (closed) and |G|_r (additive).

A level-1 certificate exhibits N as a direct summand of a finite direct sum of
building blocks; a level-r certificate exhibits N as a summand of the middle
term of an exact sequence 0 -> X -> E -> Y -> 0 with X certified at a lower
level and Y at level 1.  Closed mode allows the ring itself (block ``"R"``)
and syzygies Omega^i G (block ``i``), realized through the generator's mate;
additive mode allows only G (block ``0``).
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .matfac import MatrixFactorization, SummandWitness, lemma4_summand_scale, mf_verify
from .modules import (
    ExactSequenceClaim,
    ModuleMorphism,
    PresentedModule,
    direct_sum,
    exact_check,
    iso_check,
    lift_through,
    summand_check,
)
from .poly import PolyMatrix, Polynomial
from .star import FilteredModule, lemma3_sequence

__all__ = [
    "Generator",
    "Leaf",
    "Extension",
    "BallCertificate",
    "RadiusReport",
    "CertificateError",
    "cert_verify",
    "cert_direct_sum",
    "cert_raise",
    "cert_retarget",
    "cert_restrict",
    "cert_change_generator",
    "identity_certificate",
    "lemma5_rewrite",
    "lemma4_cert_scale",
    "theorem0_certify",
]

CLOSED, ADDITIVE = "closed", "additive"


class CertificateError(ValueError):
    pass


@dataclass(frozen=True)
class Generator:
    """The generator G; ``mate`` (with P*mate = mate*P = f*E, ideal (f)) gives canonical syzygies."""

    module: PresentedModule
    mate: PolyMatrix | None = None

    @property
    def ring(self):
        return self.module.ring

    @property
    def ideal(self):
        return self.module.ideal

    def mate_ok(self) -> bool:
        P, Q = self.module.presentation, self.mate
        if Q is None or len(self.ideal) != 1 or P.rows != P.cols or Q.shape != P.shape:
            return False
        return mf_verify(MatrixFactorization(self.ideal[0], P, Q))

    def omega(self, i: int) -> PresentedModule:
        if i == 0:
            return self.module
        if not self.mate_ok():
            raise CertificateError("syzygy block needs a generator with a valid mate")
        return self.module if i % 2 == 0 else PresentedModule(self.mate, self.ideal)

    def ring_module(self) -> PresentedModule:
        return PresentedModule(PolyMatrix(self.ring, 1, 0), self.ideal)

    def block(self, b) -> PresentedModule:
        if b == "R":
            return self.ring_module()
        if isinstance(b, int) and not isinstance(b, bool) and b >= 0:
            return self.omega(b)
        raise CertificateError(f"unknown building block {b!r}")

    def blocks_sum(self, blocks) -> PresentedModule:
        mods = [self.block(b) for b in blocks]
        if not mods:
            return PresentedModule(PolyMatrix(self.ring, 0, 0), self.ideal)
        return direct_sum(mods, self.ideal)


@dataclass(frozen=True)
class Leaf:
    blocks: tuple
    inj: ModuleMorphism
    proj: ModuleMorphism


@dataclass(frozen=True)
class Extension:
    claim: ExactSequenceClaim
    inj: ModuleMorphism  # target -> claim middle
    proj: ModuleMorphism
    sub: "BallCertificate"  # left term, level <= r - 1
    quo: "BallCertificate"  # right term, level 1


@dataclass(frozen=True)
class BallCertificate:
    mode: str
    level: int
    target: PresentedModule
    generator: Generator
    body: Leaf | Extension

    def depth(self) -> int:
        if isinstance(self.body, Leaf):
            return 1
        return 1 + max(self.body.sub.depth(), self.body.quo.depth())

    def nodes(self):
        yield self
        if isinstance(self.body, Extension):
            yield from self.body.sub.nodes()
            yield from self.body.quo.nodes()


@dataclass(frozen=True)
class RadiusReport:
    generator: PresentedModule
    level: int
    certificate: BallCertificate
    d: int

    @property
    def radius_bound(self) -> int:
        return self.level - 1

    @property
    def size_bound(self) -> int:
        return self.level - 1 if self.certificate.mode == ADDITIVE else None

    def statement(self) -> str:
        r = self.level
        kind = "|K|" if self.certificate.mode == ADDITIVE else "[K]"
        lines = [f"M lies in {kind}_{r}, so radius <= {r - 1}"]
        if self.certificate.mode == ADDITIVE:
            lines.append(f"additive membership gives size <= {r - 1}")
        return "; ".join(lines)


# -- verification --------------------------------------------------------


def cert_verify(
    c: BallCertificate,
    mode: str | None = None,
    detail: list | None = None,
    generator: PresentedModule | None = None,
    target: PresentedModule | None = None,
) -> bool:
    """Recursively check every witness and mode conformance.  ``mode`` overrides the recorded mode.

    ``generator`` and ``target`` pin the statement being certified: without
    them a certificate is only checked against the generator and target it
    carries itself.
    """
    try:
        if generator is not None and c.generator.module != generator:
            raise CertificateError("certificate is about a different generator")
        if target is not None and c.target != target:
            raise CertificateError("certificate is about a different module")
        _verify(c, mode or c.mode, c.generator, detail)
        return True
    except (CertificateError, ValueError, ZeroDivisionError) as exc:
        if detail is not None:
            detail.append(str(exc))
        return False


def _verify(c: BallCertificate, mode: str, gen: Generator, detail):
    if mode not in (CLOSED, ADDITIVE) or c.mode not in (CLOSED, ADDITIVE):
        raise CertificateError(f"unknown mode {c.mode!r}")
    if c.mode == CLOSED and mode == ADDITIVE:
        raise CertificateError("closed-mode certificate checked in additive mode")
    if c.generator != gen:
        raise CertificateError("sub-certificate uses a different generator")
    if not isinstance(c.level, int) or c.level < 1:
        raise CertificateError(f"bad level {c.level!r}")
    if not c.target.same_ideal(gen.module):
        raise CertificateError("target lives over a different ring")
    body = c.body
    if isinstance(body, Leaf):
        if c.level != 1:
            raise CertificateError("a summand leaf must sit at level 1")
        for b in body.blocks:
            if mode == ADDITIVE and b != 0:
                raise CertificateError(f"block {b!r} not allowed in additive mode")
        whole = gen.blocks_sum(body.blocks)
        _check_split(c.target, whole, body.inj, body.proj)
        return
    if not isinstance(body, Extension):
        raise CertificateError("malformed certificate body")
    if c.level < 2:
        raise CertificateError("an extension node needs level >= 2")
    claim = body.claim
    if len(claim.modules) != 3 or not (claim.left_exact and claim.right_exact):
        raise CertificateError("extension node needs a short exact sequence")
    # cheap structural checks before any Groebner work
    if body.sub.target != claim.modules[0] or body.quo.target != claim.modules[2]:
        raise CertificateError("sub-certificates do not certify the end terms")
    if body.sub.level > c.level - 1 or body.quo.level != 1:
        raise CertificateError("sub-certificate levels do not decrease")
    if body.sub.mode != c.mode or body.quo.mode != c.mode:
        raise CertificateError("sub-certificate mode differs")
    _check_split(c.target, claim.modules[1], body.inj, body.proj)
    steps: list = []
    if not exact_check(claim, steps):
        raise CertificateError(f"exactness fails: {steps}")
    _verify(body.sub, mode, gen, detail)
    _verify(body.quo, mode, gen, detail)


def _check_split(N: PresentedModule, whole: PresentedModule, inj: ModuleMorphism, proj: ModuleMorphism):
    if inj.source != N or inj.target != whole or proj.source != whole or proj.target != N:
        raise CertificateError("split maps do not connect the target with the claimed sum")
    if not summand_check(inj, proj):
        raise CertificateError("split maps fail e o n = id")


# -- small builders ------------------------------------------------------


def _coords(ring, total: int, offset: int, size: int):
    """(inclusion total <- size at offset, projection size <- total)."""
    inc = PolyMatrix.block(
        ring,
        [[PolyMatrix(ring, offset, size)], [PolyMatrix.identity(ring, size)], [PolyMatrix(ring, total - offset - size, size)]],
        [offset, size, total - offset - size],
        [size],
    )
    return inc, inc.T


def _leaf(mode, target, gen, blocks, inj: PolyMatrix, proj: PolyMatrix) -> BallCertificate:
    blocks = tuple(blocks)
    whole = gen.blocks_sum(blocks)
    return BallCertificate(mode, 1, target, gen, Leaf(blocks, ModuleMorphism(target, whole, inj), ModuleMorphism(whole, target, proj)))


def identity_certificate(gen: Generator, mode: str = CLOSED) -> BallCertificate:
    """G in [G]_1 (or |G|_1) with identity split maps."""
    E = PolyMatrix.identity(gen.ring, gen.module.ngens)
    return _leaf(mode, gen.module, gen, (0,), E, E)


def _zero_leaf(gen: Generator, mode: str, target: PresentedModule | None = None) -> BallCertificate:
    ring = gen.ring
    target = target or PresentedModule(PolyMatrix(ring, 0, 0), gen.ideal)
    return _leaf(mode, target, gen, (), PolyMatrix(ring, 0, target.ngens), PolyMatrix(ring, target.ngens, 0))


def _map_leaves(c: BallCertificate, fn, **kw) -> BallCertificate:
    """Rebuild a certificate, replacing each leaf via fn(leaf_cert) and each node's fields via kw."""
    if isinstance(c.body, Leaf):
        return fn(c)
    b = c.body
    sub = _map_leaves(b.sub, fn, **kw)
    quo = _map_leaves(b.quo, fn, **kw)
    return replace(c, body=replace(b, sub=sub, quo=quo), **kw)


def cert_change_generator(c: BallCertificate, new: Generator, J: PolyMatrix, Pi: PolyMatrix) -> BallCertificate:
    """Move every G block into a bigger generator G' through split maps J: G -> G', Pi: G' -> G."""
    ring = c.generator.ring
    if not summand_check(ModuleMorphism(c.generator.module, new.module, J), ModuleMorphism(new.module, c.generator.module, Pi)):
        raise CertificateError("generator is not a summand of the new generator")

    def fix(leaf_c: BallCertificate) -> BallCertificate:
        leaf = leaf_c.body
        if any(b != 0 for b in leaf.blocks):
            raise CertificateError("only G blocks can be moved to a new generator")
        k = len(leaf.blocks)
        Jk = PolyMatrix.block_diag(ring, [J] * k)
        Pk = PolyMatrix.block_diag(ring, [Pi] * k)
        return _leaf(leaf_c.mode, leaf_c.target, new, leaf.blocks, Jk * leaf.inj.matrix, leaf.proj.matrix * Pk)

    return _map_leaves(c, fix, generator=new)


def cert_retarget(c: BallCertificate, f: ModuleMorphism, g: ModuleMorphism) -> BallCertificate:
    """Transport a certificate along an isomorphism f: N -> N' with inverse g."""
    if f.source != c.target or not iso_check(f, g):
        raise CertificateError("retargeting needs an isomorphism out of the certified module")
    new = f.target
    if isinstance(c.body, Leaf):
        leaf = c.body
        return _leaf(c.mode, new, c.generator, leaf.blocks, leaf.inj.matrix * g.matrix, f.matrix * leaf.proj.matrix)
    b = c.body
    mid = b.claim.modules[1]
    inj = ModuleMorphism(new, mid, b.inj.matrix * g.matrix)
    proj = ModuleMorphism(mid, new, f.matrix * b.proj.matrix)
    return replace(c, target=new, body=replace(b, inj=inj, proj=proj))


def cert_restrict(c: BallCertificate, ideal) -> BallCertificate:
    """Regard an additive certificate over S/I as one over S/J for J inside I (restriction of scalars)."""
    if any(node.mode != ADDITIVE for node in c.nodes()):
        raise CertificateError("only additive certificates restrict along a ring surjection")
    gen = Generator(c.generator.module.over(ideal))

    def mod(m: PresentedModule) -> PresentedModule:
        return m.over(ideal)

    def mor(f: ModuleMorphism) -> ModuleMorphism:
        return ModuleMorphism(mod(f.source), mod(f.target), f.matrix)

    def go(node: BallCertificate) -> BallCertificate:
        if isinstance(node.body, Leaf):
            leaf = node.body
            return _leaf(node.mode, mod(node.target), gen, leaf.blocks, leaf.inj.matrix, leaf.proj.matrix)
        b = node.body
        claim = ExactSequenceClaim(tuple(mod(m) for m in b.claim.modules), tuple(mor(f) for f in b.claim.maps), True, True)
        body = Extension(claim, mor(b.inj), mor(b.proj), go(b.sub), go(b.quo))
        return BallCertificate(node.mode, node.level, mod(node.target), gen, body)

    return go(c)


def cert_raise(c: BallCertificate, level: int) -> BallCertificate:
    """Same module at a higher level via 0 -> N -> N -> 0 -> 0."""
    if level < c.level:
        raise CertificateError("cannot lower a certificate level")
    if level == c.level:
        return c
    N = c.target
    zero = PresentedModule(PolyMatrix(N.ring, 0, 0), N.ideal)
    claim = ExactSequenceClaim.short(ModuleMorphism.identity(N), ModuleMorphism.zero(N, zero))
    body = Extension(claim, ModuleMorphism.identity(N), ModuleMorphism.identity(N), c, _zero_leaf(c.generator, c.mode))
    return BallCertificate(c.mode, level, N, c.generator, body)


def _sum_maps(f: ModuleMorphism, g: ModuleMorphism, source, target) -> ModuleMorphism:
    return ModuleMorphism(source, target, PolyMatrix.block_diag(f.matrix.ring, [f.matrix, g.matrix]))


def cert_direct_sum(a: BallCertificate, b: BallCertificate) -> BallCertificate:
    """Certificate of the direct sum of the two targets at level max(a.level, b.level)."""
    if a.generator != b.generator or a.mode != b.mode:
        raise CertificateError("direct sum of certificates for different generators or modes")
    gen, ring = a.generator, a.generator.ring
    target = direct_sum([a.target, b.target], gen.ideal)
    if a.level == b.level == 1:
        la, lb = a.body, b.body
        blocks = la.blocks + lb.blocks
        return _leaf(
            a.mode,
            target,
            gen,
            blocks,
            PolyMatrix.block_diag(ring, [la.inj.matrix, lb.inj.matrix]),
            PolyMatrix.block_diag(ring, [la.proj.matrix, lb.proj.matrix]),
        )
    level = max(a.level, b.level)
    a, b = cert_raise(a, level), cert_raise(b, level)
    ea, eb = a.body, b.body
    mods = tuple(direct_sum([x, y], gen.ideal) for x, y in zip(ea.claim.modules, eb.claim.modules))
    maps = tuple(_sum_maps(f, g, mods[i], mods[i + 1]) for i, (f, g) in enumerate(zip(ea.claim.maps, eb.claim.maps)))
    claim = ExactSequenceClaim(mods, maps, True, True)
    body = Extension(
        claim,
        _sum_maps(ea.inj, eb.inj, target, mods[1]),
        _sum_maps(ea.proj, eb.proj, mods[1], target),
        cert_direct_sum(ea.sub, eb.sub),
        cert_direct_sum(ea.quo, eb.quo),
    )
    return BallCertificate(a.mode, level, target, gen, body)


def normalize_certificate(c: BallCertificate) -> BallCertificate:
    """Reduce every map column modulo the target relations (canonical representatives)."""

    def norm(f: ModuleMorphism) -> ModuleMorphism:
        tgt = f.target
        if tgt.ngens == 0 or f.matrix.cols == 0:
            return f
        cols = [tgt.reduce_vector(col).comps for col in f.matrix.columns()]
        return ModuleMorphism(f.source, tgt, PolyMatrix.from_columns(tgt.ring, cols, tgt.ngens))

    if isinstance(c.body, Leaf):
        leaf = c.body
        return replace(c, body=Leaf(leaf.blocks, norm(leaf.inj), norm(leaf.proj)))
    b = c.body
    claim = ExactSequenceClaim(b.claim.modules, tuple(norm(f) for f in b.claim.maps), True, True)
    return replace(
        c, body=Extension(claim, norm(b.inj), norm(b.proj), normalize_certificate(b.sub), normalize_certificate(b.quo))
    )


# -- syzygy rewriting ----------------------------------------------------


def _mf_generator_check(c: BallCertificate, mf: MatrixFactorization):
    gen = c.generator
    if gen.module.presentation != mf.A or not gen.module.same_ideal(PresentedModule(mf.A, (mf.f,))):
        raise CertificateError("certificate generator is not Cok A of the given factorization")
    if not mf_verify(mf):
        raise CertificateError("the given pair is not a matrix factorization")


def lemma5_rewrite(c: BallCertificate, mf: MatrixFactorization) -> BallCertificate:
    """Closed certificate for [M]_n over S/(f) into an additive one for |M + S/(f) + Omega M|_n."""
    _mf_generator_check(c, mf)
    if not cert_verify(c):
        raise CertificateError("input certificate does not verify")
    ring, f = mf.ring, mf.f
    a = mf.size
    K = PresentedModule(PolyMatrix.block_diag(ring, [mf.A, PolyMatrix(ring, 1, 0), mf.B]), (f,))
    new = Generator(K)
    total = 2 * a + 1
    part = {"even": (0, a), "R": (a, 1), "odd": (a + 1, a)}

    def fix(leaf_c: BallCertificate) -> BallCertificate:
        leaf = leaf_c.body
        incs, projs = [], []
        for b in leaf.blocks:
            key = "R" if b == "R" else ("even" if b % 2 == 0 else "odd")
            inc, pr = _coords(ring, total, *part[key])
            incs.append(inc)
            projs.append(pr)
        J = PolyMatrix.block_diag(ring, incs) if incs else PolyMatrix(ring, 0, 0)
        Pi = PolyMatrix.block_diag(ring, projs) if projs else PolyMatrix(ring, 0, 0)
        return _leaf(ADDITIVE, leaf_c.target, new, (0,) * len(leaf.blocks), J * leaf.inj.matrix, leaf.proj.matrix * Pi)

    out = _map_leaves(c, fix, generator=new, mode=ADDITIVE)
    out = _remode(out)
    if not cert_verify(out):
        raise AssertionError("rewritten certificate failed verification")
    return out


def _remode(c: BallCertificate) -> BallCertificate:
    if isinstance(c.body, Leaf):
        return c
    b = c.body
    return replace(c, mode=ADDITIVE, body=replace(b, sub=_remode(b.sub), quo=_remode(b.quo)))


# -- scaling -------------------------------------------------------------


def scaled_generator(A: PolyMatrix, B: PolyMatrix, x: Polynomial, y: Polynomial) -> Generator:
    """Cok(xA) + Cok(xB) + S/(x) over S/(xy), with mate B + A + (y); the S/(x) part is dropped for a unit x."""
    ring = A.ring
    if x.is_constant():
        P = PolyMatrix.block_diag(ring, [A * x, B * x])
        Q = PolyMatrix.block_diag(ring, [B, A])
    else:
        P = PolyMatrix.block_diag(ring, [A * x, B * x, PolyMatrix.scalar(ring, 1, x)])
        Q = PolyMatrix.block_diag(ring, [B, A, PolyMatrix.scalar(ring, 1, y)])
    return Generator(PresentedModule(P, (x * y,)), Q)


def _horseshoe(claim: ExactSequenceClaim):
    """Presentation G = [[D, H], [0, F]] of the middle term with an isomorphism to it."""
    X, Y, Z = claim.modules
    inc, proj = claim.maps
    ring = Y.ring
    D, F = X.s_matrix(), Z.s_matrix()
    lifts = []
    for j in range(Z.ngens):
        e = [ring.one() if k == j else ring.zero() for k in range(Z.ngens)]
        s = lift_through(proj, e)
        if s is None:
            raise CertificateError("quotient map is not surjective")
        lifts.append(s.comps)
    Sigma = PolyMatrix.from_columns(ring, lifts, Y.ngens)
    H_cols = []
    for col in (Sigma * F).columns():
        w = lift_through(inc, col)
        if w is None:
            raise CertificateError("sequence is not exact in the middle")
        H_cols.append([-c for c in w.comps])
    H = PolyMatrix.from_columns(ring, H_cols, X.ngens)
    G = PolyMatrix.block(ring, [[D, H], [None, F]], [D.rows, F.rows], [D.cols, F.cols])
    YG = PresentedModule(G, Y.ideal)
    phi = ModuleMorphism(YG, Y, PolyMatrix.hstack(ring, [inc.matrix, Sigma], rows=Y.ngens))
    back = []
    for k in range(Y.ngens):
        e = [ring.one() if t == k else ring.zero() for t in range(Y.ngens)]
        c = lift_through(phi, e)
        if c is None:
            raise CertificateError("horseshoe generators do not generate the middle term")
        back.append(c.comps)
    psi = ModuleMorphism(Y, YG, PolyMatrix.from_columns(ring, back, YG.ngens))
    if not iso_check(phi, psi):
        raise AssertionError("horseshoe presentation is not isomorphic to the middle term")
    return YG, phi, psi


def lemma4_cert_scale(c: BallCertificate, mateB: PolyMatrix, x) -> BallCertificate:
    """Scale a closed certificate of Cok C in [Cok A]_r over S/(y) to one of Cok(xC) in [Cok(xA)+Cok(xB)+S/(x)]_r over S/(xy)."""
    gen = c.generator
    ring = gen.ring
    x = ring(x)
    A = gen.module.presentation
    if len(gen.ideal) != 1:
        raise CertificateError("the generator must live over a hypersurface S/(y)")
    y = gen.ideal[0]
    if x.is_zero() or y.is_zero():
        raise CertificateError("scaling elements must be nonzero")
    if not mf_verify(MatrixFactorization(y, A, mateB)):
        raise CertificateError("AB = BA = yE fails for the supplied mate")
    if c.mode != CLOSED:
        raise CertificateError("scaling expects a closed-mode certificate")
    c = _with_generator(c, Generator(gen.module, mateB))
    if not cert_verify(c):
        raise CertificateError("input certificate does not verify")
    new = scaled_generator(A, mateB, x, y)
    out = _scale(c, new, A, mateB, x)
    if not cert_verify(out):
        raise AssertionError("scaled certificate failed verification")
    return out


def _with_generator(c: BallCertificate, gen: Generator) -> BallCertificate:
    if isinstance(c.body, Leaf):
        return replace(c, generator=gen)
    b = c.body
    return replace(c, generator=gen, body=replace(b, sub=_with_generator(b.sub, gen), quo=_with_generator(b.quo, gen)))


def _pads(ring, k: int, x, ideal) -> PresentedModule:
    return PresentedModule(PolyMatrix.scalar(ring, k, x), ideal)


def _pad_leaf(new: Generator, k: int, x) -> BallCertificate:
    """(S/(x))^k inside k copies of the scaled generator (its last coordinate)."""
    ring = new.ring
    target = _pads(ring, k, x, new.ideal)
    g = new.module.ngens
    inc, pr = _coords(ring, g, g - 1, 1)
    J = PolyMatrix.block_diag(ring, [inc] * k) if k else PolyMatrix(ring, 0, 0)
    P = PolyMatrix.block_diag(ring, [pr] * k) if k else PolyMatrix(ring, 0, 0)
    return _leaf(CLOSED, target, new, (0,) * k, J, P)


def _scale(c: BallCertificate, new: Generator, A: PolyMatrix, B: PolyMatrix, x) -> BallCertificate:
    ring = A.ring
    a = A.rows
    g = new.module.ngens
    ideal = new.ideal
    Nx = c.target.scaled(x)
    if isinstance(c.body, Leaf):
        leaf = c.body
        wit, k = lemma4_summand_scale(leaf.inj, leaf.proj, x)
        blocks, incs, projs = [], [], []
        for b in leaf.blocks:
            if b == "R":
                blocks.append("R")
                inc = PolyMatrix.identity(ring, 1)
            else:
                blocks.append(0)
                inc, _ = _coords(ring, g, 0 if b % 2 == 0 else a, a)
            incs.append(inc)
            projs.append(inc.T)
        for _ in range(k):
            blocks.append(0)
            inc, _ = _coords(ring, g, g - 1, 1)
            incs.append(inc)
            projs.append(inc.T)
        J = PolyMatrix.block_diag(ring, incs) if incs else PolyMatrix(ring, 0, 0)
        Pi = PolyMatrix.block_diag(ring, projs) if projs else PolyMatrix(ring, 0, 0)
        if wit.inj.target.ngens != J.cols:
            raise AssertionError("scaled summand witness has an unexpected ambient")
        return _leaf(CLOSED, Nx, new, blocks, J * wit.inj.matrix, wit.proj.matrix * Pi)

    b = c.body
    X, Y, Z = b.claim.modules
    YG, phi, psi = _horseshoe(b.claim)
    inj_G = ModuleMorphism(c.target, YG, psi.matrix * b.inj.matrix)
    proj_G = ModuleMorphism(YG, c.target, b.proj.matrix * phi.matrix)
    Xs, Ys, Zs = X.scaled(x), YG.scaled(x), Z.scaled(x)
    nx, nz = X.ngens, Z.ngens
    scaled = ExactSequenceClaim.short(
        ModuleMorphism(Xs, Ys, PolyMatrix.vstack(ring, [PolyMatrix.identity(ring, nx), PolyMatrix(ring, nz, nx)], cols=nx)),
        ModuleMorphism(Ys, Zs, PolyMatrix.hstack(ring, [PolyMatrix(ring, nz, nx), PolyMatrix.identity(ring, nz)], rows=nz)),
    )
    steps: list = []
    if not exact_check(scaled, steps):
        raise AssertionError(f"scaled horseshoe sequence is not exact: {steps}")
    wit, k = lemma4_summand_scale(inj_G, proj_G, x)
    sub = _scale(b.sub, new, A, B, x)
    quo = _scale(b.quo, new, A, B, x)
    if k:
        pads = _pads(ring, k, x, ideal)
        Xp = direct_sum([Xs, pads], ideal)
        Yp = wit.inj.target
        inc = PolyMatrix.block_diag(ring, [scaled.maps[0].matrix, PolyMatrix.identity(ring, k)])
        pr = PolyMatrix.hstack(ring, [scaled.maps[1].matrix, PolyMatrix(ring, nz, k)], rows=nz)
        claim = ExactSequenceClaim.short(ModuleMorphism(Xp, Yp, inc), ModuleMorphism(Yp, Zs, pr))
        sub = cert_direct_sum(sub, _pad_leaf(new, k, x))
    else:
        claim = scaled
    body = Extension(claim, wit.inj, wit.proj, sub, quo)
    return BallCertificate(CLOSED, c.level, Nx, new, body)


# -- the radius pipeline -------------------------------------------------


def _identity_iso(N: PresentedModule, N2: PresentedModule):
    E = PolyMatrix.identity(N.ring, N.ngens)
    return ModuleMorphism(N, N2, E), ModuleMorphism(N2, N, E)


def theorem0_certify(fm: FilteredModule, gens) -> RadiusReport:
    """Certificate that M = Cok A lies in |K|_{d+2}, K = (+) K_i (+) (+)_{i>=2} S/(x_i...x_n).

    ``gens`` lists, per layer, ``(mf_i, d_i, c_i)``: a factorization (P_i, Q_i)
    of x_i and a closed certificate of Cok A_i in [Cok P_i]_{d_i+1} over
    S/(x_i).  For a single layer the level-(d_1+1) certificate is returned.
    """
    ring, n = fm.ring, fm.n
    gens = list(gens)
    if len(gens) != n:
        raise CertificateError("need one generator hypothesis per layer")
    problems = fm.validate()
    if problems:
        raise CertificateError("; ".join(problems))
    h = fm.h
    per_layer, Ks = [], []
    for i, (mf, d_i, c_i) in enumerate(gens, start=1):
        xi = fm.x(i)
        if mf.f != xi:
            raise CertificateError(f"generator {i} does not factor x_{i}")
        expected = PresentedModule(fm.A(i), (xi,))
        if c_i.target != expected:
            raise CertificateError(f"certificate {i} does not certify Cok A_{i} over S/(x_{i})")
        if c_i.level != d_i + 1:
            raise CertificateError(f"certificate {i} has level {c_i.level}, expected {d_i + 1}")
        x = fm.xprod(1, i - 1)
        scaled = lemma4_cert_scale(c_i, mf.B, x)
        H = scaled.generator
        add = lemma5_rewrite(scaled, MatrixFactorization(H.ideal[0], H.module.presentation, H.mate))
        per_layer.append(add)
        Ks.append(add.generator.module)
    if n == 1:
        cert = normalize_certificate(per_layer[0])
        K = cert.generator.module
        target = fm.module()
        if cert.target != target:
            cert = cert_retarget(cert, *_identity_iso(cert.target, target))
        report = RadiusReport(K, cert.level, cert, gens[0][1])
        _check_report(report)
        return report

    seq = lemma3_sequence(fm)
    tails = [PolyMatrix.scalar(ring, 1, fm.xprod(i, n)) for i in range(2, n + 1)]
    K_parts = [K.over((h,)) for K in Ks]
    Kmat = PolyMatrix.block_diag(ring, [K.presentation for K in K_parts] + tails)
    K = PresentedModule(Kmat, (h,))
    gen = Generator(K)
    total = K.ngens
    offsets, off = [], 0
    for part in K_parts:
        offsets.append(off)
        off += part.ngens
    tail_offsets = list(range(off, total))

    moved = []
    for i, add in enumerate(per_layer):
        r = cert_restrict(add, (h,))
        J, Pi = _coords(ring, total, offsets[i], K_parts[i].ngens)
        r = cert_change_generator(r, gen, J, Pi)
        r = cert_retarget(r, *_identity_iso(r.target, seq.left_parts[i]))
        moved.append(r)
    left_cert = moved[0]
    for r in moved[1:]:
        left_cert = cert_direct_sum(left_cert, r)
    if left_cert.target != seq.left:
        left_cert = cert_retarget(left_cert, *_identity_iso(left_cert.target, seq.left))

    # right term: p_i copies of S/(x_i...x_n), each the i-th tail coordinate of K
    incs = []
    for i in range(2, n + 1):
        inc, _ = _coords(ring, total, tail_offsets[i - 2], 1)
        incs += [inc] * fm.p(i)
    J = PolyMatrix.block_diag(ring, incs)
    right_cert = _leaf(ADDITIVE, seq.right, gen, (0,) * len(incs), J, J.T)

    M = fm.module()
    P = M.ngens
    mid = seq.middle
    inj = ModuleMorphism(M, mid, PolyMatrix.vstack(ring, [PolyMatrix.identity(ring, P), PolyMatrix(ring, seq.p, P)], cols=P))
    proj = ModuleMorphism(mid, M, inj.matrix.T)
    level = left_cert.level + 1
    cert = BallCertificate(ADDITIVE, level, M, gen, Extension(seq.claim, inj, proj, left_cert, right_cert))
    cert = normalize_certificate(cert)
    d = max(d_i for _, d_i, _ in gens)
    report = RadiusReport(K, cert.level, cert, d)
    _check_report(report)
    if cert.level != d + 2:
        raise AssertionError(f"certificate level {cert.level} differs from d + 2 = {d + 2}")
    return report


def _check_report(report: RadiusReport):
    detail: list = []
    if not cert_verify(report.certificate, detail=detail):
        raise AssertionError(f"radius certificate failed verification: {detail}")


def report_verify(report: RadiusReport) -> bool:
    return (
        report.certificate.generator.module == report.generator
        and report.level == report.certificate.level
        and cert_verify(report.certificate)
    )


def summand_witness(c: BallCertificate) -> SummandWitness:
    body = c.body
    return SummandWitness(body.inj, body.proj)
