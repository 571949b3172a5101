"""Finitely presented modules over S/I, their morphisms, and verification of
isomorphism, split-summand and exactness claims.

A :class:`PresentedModule` is ``Cok(P: (S/I)^n -> (S/I)^m)``.  A
:class:`ModuleMorphism` is an ambient matrix ``F`` (target.m x source.m)
sending generators to generators.  Nothing here ever searches for maps; every
check is a set of Gröbner membership tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .groebner import (
    FreeModuleElement,
    groebner_basis,
    lift_solve,
    module_kernel,
    normal_form,
    preimage,
    submodule_basis,
)
from .poly import PolyMatrix, Ring, RingMismatch, ShapeMismatch

__all__ = [
    "PresentedModule",
    "ModuleMorphism",
    "ExactSequenceClaim",
    "morphism_check",
    "iso_check",
    "summand_check",
    "exact_check",
    "morphisms_equal",
    "morphism_kernel",
    "submodule_presentation",
]


def _ideal_tuple(ring: Ring, ideal) -> tuple:
    return tuple(g for g in (ring(g) for g in ideal) if not g.is_zero())


@dataclass(frozen=True)
class PresentedModule:
    """Cok(presentation) over S/(ideal)."""

    presentation: PolyMatrix
    ideal: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "ideal", _ideal_tuple(self.presentation.ring, self.ideal))

    # -- constructors --------------------------------------------------
    @classmethod
    def free(cls, ring: Ring, rank: int, ideal=()) -> "PresentedModule":
        return cls(PolyMatrix(ring, rank, 0), ideal)

    @classmethod
    def zero(cls, ring: Ring, ideal=()) -> "PresentedModule":
        return cls(PolyMatrix(ring, 0, 0), ideal)

    @classmethod
    def cyclic(cls, ring: Ring, gens, ideal=()) -> "PresentedModule":
        """S/(gens) as a 1 x len(gens) presentation."""
        gens = [ring(g) for g in gens]
        return cls(PolyMatrix(ring, 1, len(gens), [gens]), ideal)

    # -- basic data ----------------------------------------------------
    @property
    def ring(self) -> Ring:
        return self.presentation.ring

    @property
    def ngens(self) -> int:
        return self.presentation.rows

    @property
    def nrels(self) -> int:
        return self.presentation.cols

    def s_matrix(self) -> PolyMatrix:
        """A presentation of the same module over S itself: [P | g*E for g in ideal]."""
        m = self.ngens
        blocks = [self.presentation] + [PolyMatrix.scalar(self.ring, m, g) for g in self.ideal]
        return PolyMatrix.hstack(self.ring, blocks, rows=m)

    @cached_property
    def relations(self):
        """Gröbner basis of Im P + I*S^m inside S^m."""
        return submodule_basis(self.presentation.columns(), self.ideal, self.ngens, self.ring)

    def is_zero_vector(self, v) -> bool:
        if self.ngens == 0:
            return True
        return normal_form(v, self.relations).is_zero()

    def reduce_vector(self, v) -> FreeModuleElement:
        if self.ngens == 0:
            return FreeModuleElement(self.ring, ())
        return normal_form(v, self.relations)

    def same_ideal(self, other: "PresentedModule") -> bool:
        return self.ideal == other.ideal or _ideal_gb(self.ring, self.ideal) == _ideal_gb(self.ring, other.ideal)

    def scaled(self, x) -> "PresentedModule":
        """Cok(x*P) over S/(x*I): the module written Cok(xA) when P absorbs I."""
        x = self.ring(x)
        return PresentedModule(self.presentation * x, tuple(x * g for g in self.ideal))

    def over(self, ideal) -> "PresentedModule":
        """The same S-module presented over S/(ideal); ``ideal`` must lie in this module's ideal."""
        ideal = _ideal_tuple(self.ring, ideal)
        if ideal == self.ideal:
            return self
        own = _ideal_gb(self.ring, self.ideal)
        for g in ideal:
            if not self.ideal or not normal_form(g, own).is_zero():
                raise ValueError(f"{g} does not lie in the ideal {self.ideal}")
        return PresentedModule(self.s_matrix(), ideal)

    def annihilated_by(self, y) -> bool:
        y = self.ring(y)
        zero = self.ring.zero()
        for i in range(self.ngens):
            v = [zero] * self.ngens
            v[i] = y
            if not self.is_zero_vector(v):
                return False
        return True

    def __repr__(self):
        ideal = ", ".join(str(g) for g in self.ideal)
        return f"PresentedModule({self.ngens}x{self.nrels} over S/({ideal}))"


def _ideal_gb(ring: Ring, ideal):
    return groebner_basis(list(ideal), 1, ring) if ideal else None


def direct_sum(modules, ideal=None) -> PresentedModule:
    modules = list(modules)
    if not modules:
        raise ValueError("direct sum of nothing needs an explicit ring; use PresentedModule.zero")
    ring = modules[0].ring
    if ideal is None:
        ideal = modules[0].ideal
        for m in modules[1:]:
            if not m.same_ideal(modules[0]):
                raise ValueError("direct sum of modules over different quotient rings")
    return PresentedModule(PolyMatrix.block_diag(ring, [m.presentation for m in modules]), ideal)


@dataclass(frozen=True)
class ModuleMorphism:
    source: PresentedModule
    target: PresentedModule
    matrix: PolyMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.target.ngens, self.source.ngens):
            raise ShapeMismatch(
                f"morphism matrix {self.matrix.shape} does not fit {self.source.ngens} -> {self.target.ngens} generators"
            )
        if self.matrix.ring != self.source.ring or self.source.ring != self.target.ring:
            raise RingMismatch("morphism data over different rings")

    @classmethod
    def identity(cls, module: PresentedModule) -> "ModuleMorphism":
        return cls(module, module, PolyMatrix.identity(module.ring, module.ngens))

    @classmethod
    def zero(cls, source: PresentedModule, target: PresentedModule) -> "ModuleMorphism":
        return cls(source, target, PolyMatrix(source.ring, target.ngens, source.ngens))

    def then(self, other: "ModuleMorphism") -> "ModuleMorphism":
        """``other`` after ``self``."""
        if other.source != self.target:
            raise ValueError("composition of non-composable morphisms")
        return ModuleMorphism(self.source, other.target, other.matrix * self.matrix)

    def __repr__(self):
        return f"ModuleMorphism({self.source!r} -> {self.target!r})"


def compose(g: ModuleMorphism, f: ModuleMorphism) -> ModuleMorphism:
    """g o f."""
    return f.then(g)


def morphism_sum(maps, source: PresentedModule | None = None, target: PresentedModule | None = None) -> ModuleMorphism:
    """Block-diagonal sum of morphisms."""
    maps = list(maps)
    ring = maps[0].source.ring
    src = source or direct_sum([f.source for f in maps])
    tgt = target or direct_sum([f.target for f in maps])
    return ModuleMorphism(src, tgt, PolyMatrix.block_diag(ring, [f.matrix for f in maps]))


def _check_same_ring(f: ModuleMorphism):
    if not f.source.same_ideal(f.target):
        raise ValueError("source and target live over different quotient rings")


def morphism_check(f: ModuleMorphism) -> bool:
    """True iff F maps every source relation into the target relations."""
    _check_same_ring(f)
    if f.target.ngens == 0:
        return True
    image = f.matrix * f.source.presentation
    return all(f.target.is_zero_vector(c) for c in image.columns())


def morphisms_equal(f: ModuleMorphism, g: ModuleMorphism) -> bool:
    """f == g as maps of presented modules (difference lands in the target relations)."""
    if f.source != g.source or f.target != g.target:
        raise ValueError("comparing morphisms with different source/target")
    diff = f.matrix - g.matrix
    return all(f.target.is_zero_vector(c) for c in diff.columns())


def is_zero_morphism(f: ModuleMorphism) -> bool:
    return all(f.target.is_zero_vector(c) for c in f.matrix.columns())


def iso_check(f: ModuleMorphism, g: ModuleMorphism) -> bool:
    """f: M -> N and g: N -> M are well defined and mutually inverse."""
    if f.source != g.target or f.target != g.source:
        raise ValueError("iso_check needs f: M -> N and g: N -> M")
    if not (morphism_check(f) and morphism_check(g)):
        return False
    M, N = f.source, f.target
    return morphisms_equal(f.then(g), ModuleMorphism.identity(M)) and morphisms_equal(
        g.then(f), ModuleMorphism.identity(N)
    )


def summand_check(n: ModuleMorphism, e: ModuleMorphism) -> bool:
    """n: N -> E and e: E -> N with e o n = id_N."""
    if n.source != e.target or n.target != e.source:
        raise ValueError("summand_check needs n: N -> E and e: E -> N")
    # everything landing in N first: N's relations are usually the cheaper basis
    if not (morphism_check(e) and morphisms_equal(n.then(e), ModuleMorphism.identity(n.source))):
        return False
    return morphism_check(n)


def morphism_kernel(f: ModuleMorphism) -> list:
    """Generators (vectors in the source's ambient S^m) of ker f, reduced; empty means zero kernel."""
    src, tgt = f.source, f.target
    ring = src.ring
    if src.ngens == 0:
        return []
    if tgt.ngens == 0:
        gens = [FreeModuleElement(ring, tuple(ring.one() if i == j else ring.zero() for i in range(src.ngens))) for j in range(src.ngens)]
    else:
        # source relations map into the target relations once f is well defined
        rels = src.s_matrix().columns() if morphism_check(f) else ()
        gens = preimage(f.matrix, tgt.presentation, tgt.ideal, rels)
    out = []
    seen = set()
    for g in gens:
        r = src.reduce_vector(g)
        if r.is_zero() or r in seen:
            continue
        seen.add(r)
        out.append(r)
    return out


def in_image(v, f: ModuleMorphism) -> bool:
    """v (a vector over the target's generators) lies in Im f + target relations."""
    tgt = f.target
    if tgt.ngens == 0:
        return True
    cols = f.matrix.columns() + tgt.presentation.columns()
    gb = submodule_basis(cols, tgt.ideal, tgt.ngens, tgt.ring)
    return normal_form(v, gb).is_zero()


def is_injective(f: ModuleMorphism) -> bool:
    return not morphism_kernel(f)


def is_surjective(f: ModuleMorphism) -> bool:
    tgt = f.target
    ring = tgt.ring
    for i in range(tgt.ngens):
        e = [ring.one() if k == i else ring.zero() for k in range(tgt.ngens)]
        if not in_image(e, f):
            return False
    return True


@dataclass(frozen=True)
class ExactSequenceClaim:
    """M_0 -> M_1 -> ... -> M_k with optional 0 -> on the left / -> 0 on the right."""

    modules: tuple
    maps: tuple
    left_exact: bool = False
    right_exact: bool = False

    def __post_init__(self):
        object.__setattr__(self, "modules", tuple(self.modules))
        object.__setattr__(self, "maps", tuple(self.maps))
        if len(self.maps) != len(self.modules) - 1:
            raise ValueError("an exact sequence claim needs one map between consecutive modules")
        for i, f in enumerate(self.maps):
            if f.source != self.modules[i] or f.target != self.modules[i + 1]:
                raise ValueError(f"map {i} does not connect modules {i} and {i + 1}")

    @classmethod
    def short(cls, inc: ModuleMorphism, proj: ModuleMorphism) -> "ExactSequenceClaim":
        """0 -> X -> E -> Y -> 0."""
        return cls((inc.source, inc.target, proj.target), (inc, proj), True, True)


def exact_check(claim: ExactSequenceClaim, detail: list | None = None) -> bool:
    """Verify well-definedness, complex property, ker = im at interior spots, and the end flags.

    When ``detail`` is a list, a short reason is appended on failure.
    """

    def fail(msg):
        if detail is not None:
            detail.append(msg)
        return False

    for i, f in enumerate(claim.maps):
        if not morphism_check(f):
            return fail(f"map {i} is not well defined")
    maps = claim.maps
    for i in range(len(maps) - 1):
        f, g = maps[i], maps[i + 1]
        if not is_zero_morphism(f.then(g)):
            return fail(f"composite at position {i + 1} is nonzero")
        for v in morphism_kernel(g):
            if not in_image(v, f):
                return fail(f"kernel not contained in image at position {i + 1}")
    if claim.left_exact and maps and not is_injective(maps[0]):
        return fail("first map is not injective")
    if claim.right_exact and maps and not is_surjective(maps[-1]):
        return fail("last map is not surjective")
    if not maps and (claim.left_exact and claim.right_exact):
        # 0 -> M -> 0 is exact iff M = 0
        if not all(claim.modules[0].is_zero_vector(e) for e in PolyMatrix.identity(claim.modules[0].ring, claim.modules[0].ngens).columns()):
            return fail("0 -> M -> 0 with M nonzero")
    return True


def submodule_presentation(module: PresentedModule, gens) -> PolyMatrix:
    """Relation matrix (k x r) of the submodule of ``module`` spanned by the k vectors ``gens``.

    The result R satisfies Cok_{S/I}(R) = span(gens) via e_j -> gens[j].
    """
    ring = module.ring
    gens = [tuple(ring(c) for c in g) for g in gens]
    k = len(gens)
    if k == 0:
        return PolyMatrix(ring, 0, 0)
    K = PolyMatrix.from_columns(ring, gens, module.ngens)
    aug = PolyMatrix.hstack(ring, [K, module.presentation], rows=module.ngens)
    syz = [g.comps[:k] for g in module_kernel(aug, module.ideal)] if module.ngens else []
    if module.ngens == 0:
        syz = [tuple(ring.one() if i == j else ring.zero() for i in range(k)) for j in range(k)]
    # drop syzygies that are multiples of the ideal (they vanish over S/I anyway)
    cols = []
    seen = set()
    quot = groebner_basis(
        [tuple(g if i == j else ring.zero() for i in range(k)) for g in module.ideal for j in range(k)], k, ring
    ) if module.ideal else None
    for s in syz:
        if quot is not None:
            s = normal_form(s, quot).comps
        if all(p.is_zero() for p in s) or s in seen:
            continue
        seen.add(s)
        cols.append(s)
    return PolyMatrix.from_columns(ring, cols, k)


def lift_through(f: ModuleMorphism, v):
    """Coefficients c (over the source generators) with F*c = v in the target; None if v is not in the image."""
    tgt = f.target
    ring = tgt.ring
    aug = PolyMatrix.hstack(ring, [f.matrix, tgt.presentation], rows=tgt.ngens)
    c = lift_solve(aug, v, tgt.ideal)
    if c is None:
        return None
    return FreeModuleElement(ring, c.comps[: f.source.ngens])
