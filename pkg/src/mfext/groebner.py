"""Gröbner bases of submodules of free modules S^r over a polynomial ring.

Module order is position-over-term: a lower position index is the larger
position, and ties are broken by the ring's monomial order.  Internally a
module monomial is stored as its sort key, which is linear in the exponent
vector, so products of monomials are componentwise sums of keys and the
leading term of a vector is simply ``max`` over its keys.

Quotient rings S/I are handled by adjoining ``g * e_i`` for every ``g`` in
``modulo``; lifting and kernels use the standard augmentation trick (a column
``a_j`` becomes ``(a_j, e_j)`` in S^(m+n), the first ``m`` positions being the
larger ones).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from functools import lru_cache

from .poly import PolyMatrix, Polynomial, Ring, RingMismatch, ShapeMismatch

__all__ = [
    "FreeModuleElement",
    "GroebnerBasis",
    "groebner_basis",
    "normal_form",
    "lift_solve",
    "module_kernel",
    "preimage",
    "in_submodule",
    "vec",
]


@dataclass(frozen=True)
class FreeModuleElement:
    """A column vector in S^rank."""

    ring: Ring
    comps: tuple

    def __post_init__(self):
        object.__setattr__(self, "comps", tuple(self.ring(c) for c in self.comps))

    @property
    def rank(self) -> int:
        return len(self.comps)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.comps)

    def __getitem__(self, i):
        return self.comps[i]

    def __iter__(self):
        return iter(self.comps)

    def __add__(self, other):
        return FreeModuleElement(self.ring, tuple(a + b for a, b in zip(self.comps, other.comps)))

    def __sub__(self, other):
        return FreeModuleElement(self.ring, tuple(a - b for a, b in zip(self.comps, other.comps)))

    def __neg__(self):
        return FreeModuleElement(self.ring, tuple(-a for a in self.comps))

    def scale(self, p) -> "FreeModuleElement":
        p = self.ring(p)
        return FreeModuleElement(self.ring, tuple(p * a for a in self.comps))

    def __repr__(self):
        return "(" + ", ".join(str(c) for c in self.comps) + ")"


def vec(ring: Ring, comps) -> FreeModuleElement:
    return FreeModuleElement(ring, tuple(comps))


# ---------------------------------------------------------------------------
# monomial key arithmetic


class _Codec:
    """Encodes (position, exponent) pairs as order keys and does monomial arithmetic on keys."""

    def __init__(self, ring: Ring):
        self.ring = ring
        self.n = ring.nvars
        self.grevlex = ring.order == "grevlex"
        self.field = ring.field
        self.char = ring.field.characteristic

    def encode(self, pos: int, e) -> tuple:
        if self.grevlex:
            return (-pos, sum(e)) + tuple(-a for a in reversed(e))
        return (-pos,) + tuple(e)

    def decode(self, k):
        if self.grevlex:
            return -k[0], tuple(-a for a in reversed(k[2:]))
        return -k[0], tuple(k[1:])

    def term(self, e) -> tuple:
        return self.encode(0, e)

    def divides(self, t, k) -> bool:
        if t[0] != k[0]:
            return False
        if self.grevlex:
            for a, b in zip(t[2:], k[2:]):
                if a < b:
                    return False
            return True
        for a, b in zip(t[1:], k[1:]):
            if a > b:
                return False
        return True

    def lcm(self, a, b) -> tuple:
        if self.grevlex:
            negs = tuple(min(x, y) for x, y in zip(a[2:], b[2:]))
            return (a[0], -sum(negs)) + negs
        return (a[0],) + tuple(max(x, y) for x, y in zip(a[1:], b[1:]))

    def coprime(self, a, b) -> bool:
        if self.grevlex:
            return all(x == 0 or y == 0 for x, y in zip(a[2:], b[2:]))
        return all(x == 0 or y == 0 for x, y in zip(a[1:], b[1:]))

    # -- conversions between FreeModuleElements and internal dicts --------
    def to_internal(self, comps) -> dict:
        out = {}
        for pos, p in enumerate(comps):
            for e, c in p.items():
                out[self.encode(pos, e)] = c
        return out

    def to_comps(self, d: dict, rank: int):
        buckets = [dict() for _ in range(rank)]
        for k, c in d.items():
            pos, e = self.decode(k)
            buckets[pos][e] = c
        return tuple(Polynomial(self.ring, b) for b in buckets)


def _madd(a, b):
    return tuple([x + y for x, y in zip(a, b)])


def _neg(a):
    return tuple([-x for x in a])


def _msub(a, b):
    return tuple([x - y for x, y in zip(a, b)])


class _Reducer:
    """Division by a list of monic vectors, grouped by leading position."""

    def __init__(self, codec: _Codec, basis):
        self.codec = codec
        self.by_pos = {}
        for lk, g in basis:
            self.by_pos.setdefault(lk[0], []).append((lk, g))

    def find(self, k):
        divides = self.codec.divides
        for lk, g in self.by_pos.get(k[0], ()):
            if divides(lk, k):
                return lk, g
        return None

    def reduce(self, f: dict, full: bool = True) -> dict:
        f = dict(f)
        rem = {}
        p = self.codec.char
        # max-heap of live keys (negated), stale entries skipped on pop
        heap = [_neg(k) for k in f]
        heapq.heapify(heap)
        queued = set(f)
        while heap:
            k = _neg(heapq.heappop(heap))
            queued.discard(k)
            c = f.get(k)
            if c is None:
                continue
            hit = self.find(k)
            if hit is None:
                if not full:
                    rem.update(f)
                    return rem
                rem[k] = c
                del f[k]
                continue
            lk, g = hit
            q = _msub(k, lk)
            for gk, gc in g.items():
                kk = _madd(gk, q)
                v = f.get(kk, 0) - c * gc
                if p:
                    v %= p
                if v:
                    f[kk] = v
                    if kk not in queued:
                        queued.add(kk)
                        heapq.heappush(heap, _neg(kk))
                else:
                    f.pop(kk, None)
        return rem


def _monic(codec: _Codec, d: dict) -> dict:
    lk = max(d)
    inv = codec.field.inv(d[lk])
    p = codec.char
    if p:
        return {k: c * inv % p for k, c in d.items()}
    return {k: c * inv for k, c in d.items()}


def _spoly(codec: _Codec, a, b):
    (ka, fa), (kb, fb) = a, b
    l = codec.lcm(ka, kb)
    qa = _msub(l, ka)
    qb = _msub(l, kb)
    out = {}
    for k, c in fa.items():
        out[_madd(k, qa)] = c
    p = codec.char
    for k, c in fb.items():
        kk = _madd(k, qb)
        v = out.get(kk, 0) - c
        if p:
            v %= p
        if v:
            out[kk] = v
        else:
            out.pop(kk, None)
    return out


def _buchberger(codec: _Codec, gens, ideal_case: bool):
    """Reduced Gröbner basis (list of monic internal dicts) of the span of ``gens``."""
    G = []  # list of (lead key, dict)
    pending = set()
    heap = []

    def add(h):
        h = _monic(codec, h)
        lk = max(h)
        idx = len(G)
        G.append((lk, h))
        for i, (ki, _) in enumerate(G[:-1]):
            if ki[0] == lk[0]:
                l = codec.lcm(ki, lk)
                pending.add((i, idx))
                heapq.heappush(heap, (l, i, idx))

    for g in gens:
        if g:
            h = _Reducer(codec, G).reduce(g) if G else g
            if h:
                add(h)
    while heap:
        l, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        ki, kj = G[i][0], G[j][0]
        if ideal_case and codec.coprime(ki, kj):
            continue
        skip = False
        for k, (kk, _) in enumerate(G):
            if k == i or k == j or kk[0] != l[0]:
                continue
            if codec.divides(kk, l) and (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                skip = True
                break
        if skip:
            continue
        s = _spoly(codec, G[i], G[j])
        if not s:
            continue
        red = _Reducer(codec, G)
        h = red.reduce(s)
        if h:
            add(h)
    # minimalize, then interreduce
    minimal = []
    for k, g in sorted(G, key=lambda kg: kg[0]):
        if not any(codec.divides(k2, k) for k2, _ in minimal):
            minimal.append((k, g))
    out = []
    for idx, (k, g) in enumerate(minimal):
        others = [kg for j, kg in enumerate(minimal) if j != idx]
        r = _Reducer(codec, others).reduce(g)
        out.append((max(r), _monic(codec, r)))
    out.sort(key=lambda kg: kg[0], reverse=True)
    return out


@dataclass(frozen=True, eq=False)
class GroebnerBasis:
    """Reduced Gröbner basis of a submodule of S^rank (rank 1: an ideal)."""

    ring: Ring
    rank: int
    generators: tuple
    order: str = "POT"

    @property
    def _internal(self):
        cached = self.__dict__.get("_int")
        if cached is None:
            codec = _Codec(self.ring)
            cached = [(max(d), d) for d in (codec.to_internal(g.comps) for g in self.generators)]
            object.__setattr__(self, "_int", cached)
        return cached

    def leading_terms(self):
        """List of (position, exponent vector) of leading monomials."""
        codec = _Codec(self.ring)
        return [codec.decode(k) for k, _ in self._internal]

    def is_zero_module(self) -> bool:
        return not self.generators

    def __eq__(self, other):
        return (
            isinstance(other, GroebnerBasis)
            and self.ring == other.ring
            and self.rank == other.rank
            and self.generators == other.generators
        )

    def __hash__(self):
        return hash((self.ring, self.rank, self.generators))

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


def _as_comps(ring: Ring, v, rank: int):
    if isinstance(v, FreeModuleElement):
        if v.ring != ring:
            raise RingMismatch(f"{v.ring} vs {ring}")
        comps = v.comps
    elif isinstance(v, Polynomial):
        comps = (v,)
    else:
        comps = tuple(ring(c) for c in v)
    if len(comps) != rank:
        raise ShapeMismatch(f"vector of rank {len(comps)} where rank {rank} expected")
    return comps


@lru_cache(maxsize=4096)
def _gb_cached(ring: Ring, rank: int, gens: frozenset):
    codec = _Codec(ring)
    internal = [codec.to_internal(c) for c in sorted(gens, key=_comps_sort_key)]
    basis = _buchberger(codec, internal, ideal_case=(rank == 1))
    return GroebnerBasis(ring, rank, tuple(FreeModuleElement(ring, codec.to_comps(d, rank)) for _, d in basis))


def _comps_sort_key(comps):
    return tuple(tuple(sorted((e, str(c)) for e, c in p.items())) for p in comps)


def groebner_basis(gens, ambient_rank: int, ring: Ring | None = None) -> GroebnerBasis:
    """Reduced Gröbner basis of the submodule of S^ambient_rank spanned by ``gens``.

    ``gens`` may hold FreeModuleElements, Polynomials (rank 1) or sequences of
    polynomials.  The result does not depend on the order of ``gens``.
    """
    gens = list(gens)
    if ring is None:
        if not gens:
            raise ValueError("ring required for an empty generator list")
        first = gens[0]
        ring = first.ring if isinstance(first, (FreeModuleElement, Polynomial)) else first[0].ring
    comps = frozenset(
        c for c in (_as_comps(ring, g, ambient_rank) for g in gens) if any(not p.is_zero() for p in c)
    )
    return _gb_cached(ring, ambient_rank, comps)


def normal_form(v, gb: GroebnerBasis) -> FreeModuleElement:
    comps = _as_comps(gb.ring, v, gb.rank)
    codec = _Codec(gb.ring)
    r = _Reducer(codec, gb._internal).reduce(codec.to_internal(comps))
    return FreeModuleElement(gb.ring, codec.to_comps(r, gb.rank))


def _modulo_gens(ring: Ring, modulo, rank: int, offset: int = 0, total: int | None = None):
    total = rank if total is None else total
    zero = ring.zero()
    out = []
    for g in modulo:
        g = ring(g)
        if g.is_zero():
            continue
        for i in range(rank):
            comps = [zero] * total
            comps[offset + i] = g
            out.append(tuple(comps))
    return out


def submodule_basis(columns, modulo, rank: int, ring: Ring) -> GroebnerBasis:
    """Gröbner basis of span(columns) + modulo * S^rank."""
    gens = [_as_comps(ring, c, rank) for c in columns]
    gens += _modulo_gens(ring, modulo, rank)
    return groebner_basis(gens, rank, ring)


def in_submodule(v, columns, modulo, rank: int, ring: Ring) -> bool:
    return normal_form(v, submodule_basis(columns, modulo, rank, ring)).is_zero()


@lru_cache(maxsize=2048)
def _augmented(A: PolyMatrix, modulo: tuple) -> GroebnerBasis:
    ring, m, n = A.ring, A.rows, A.cols
    zero, one = ring.zero(), ring.one()
    gens = []
    for j, col in enumerate(A.columns()):
        tail = [zero] * n
        tail[j] = one
        gens.append(tuple(col) + tuple(tail))
    gens += _modulo_gens(ring, modulo, m, 0, m + n)
    return groebner_basis(gens, m + n, ring)


@lru_cache(maxsize=512)
def _preimage_basis(F: PolyMatrix, B: PolyMatrix, modulo: tuple, source: tuple) -> GroebnerBasis:
    ring, m, n = F.ring, F.rows, F.cols
    zero, one = ring.zero(), ring.one()
    gens = []
    for j, col in enumerate(F.columns()):
        tail = [zero] * n
        tail[j] = one
        gens.append(tuple(col) + tuple(tail))
    gens += [tuple(col) + (zero,) * n for col in B.columns()]
    gens += _modulo_gens(ring, modulo, m, 0, m + n)
    # relations already known to lie in the preimage keep the tail part small
    gens += [(zero,) * m + tuple(c) for c in source]
    return groebner_basis(gens, m + n, ring)


def preimage(F: PolyMatrix, B: PolyMatrix, modulo=(), source=()) -> list:
    """Generators of {c in S^n : F c in Im B + (modulo) S^m}, given modulo the vectors ``source``.

    Only the coefficients on F are tracked, so this is much cheaper than the
    kernel of [F | B].  ``source`` must already lie in the preimage.
    """
    ring, m = F.ring, F.rows
    if B.rows != m:
        raise ShapeMismatch(f"{F.shape} vs {B.shape}")
    modulo = _check_modulo(ring, modulo)
    source = tuple(tuple(c) for c in source)
    gb = _preimage_basis(F, B, modulo, source)
    return [FreeModuleElement(ring, g.comps[m:]) for (pos, _), g in zip(gb.leading_terms(), gb.generators) if pos >= m]


def _check_modulo(ring: Ring, modulo):
    out = []
    for g in modulo:
        g = ring(g)
        if not g.is_zero():
            out.append(g)
    return tuple(out)


def lift_solve(A: PolyMatrix, b, modulo=()) -> FreeModuleElement | None:
    """Solve A*c = b modulo (modulo)*S^m; ``None`` when b is not in the image."""
    ring, m, n = A.ring, A.rows, A.cols
    comps = _as_comps(ring, b, m)
    modulo = _check_modulo(ring, modulo)
    gb = _augmented(A, modulo)
    zero = ring.zero()
    r = normal_form(tuple(comps) + (zero,) * n, gb)
    if any(not p.is_zero() for p in r.comps[:m]):
        return None
    return FreeModuleElement(ring, tuple(-p for p in r.comps[m:]))


def lift_matrix(A: PolyMatrix, B: PolyMatrix, modulo=()) -> PolyMatrix | None:
    """Matrix X with A*X = B modulo (modulo), column by column; ``None`` if some column fails."""
    if A.rows != B.rows:
        raise ShapeMismatch(f"{A.shape} vs {B.shape}")
    cols = []
    for col in B.columns():
        c = lift_solve(A, col, modulo)
        if c is None:
            return None
        cols.append(c.comps)
    return PolyMatrix.from_columns(A.ring, cols, A.cols)


def module_kernel(A: PolyMatrix, modulo=()) -> list:
    """Generators of ker(A: (S/I)^n -> (S/I)^m); empty list means the kernel is zero."""
    ring, m, n = A.ring, A.rows, A.cols
    modulo = _check_modulo(ring, modulo)
    gb = _augmented(A, modulo)
    raw = []
    for (pos, _), g in zip(gb.leading_terms(), gb.generators):
        if pos >= m:
            raw.append(g.comps[m:])
    if not raw:
        return []
    if modulo:
        quot = groebner_basis(_modulo_gens(ring, modulo, n), n, ring)
        raw = [normal_form(c, quot).comps for c in raw]
    out = []
    seen = set()
    for c in raw:
        if all(p.is_zero() for p in c) or c in seen:
            continue
        seen.add(c)
        out.append(FreeModuleElement(ring, c))
    return out
