"""Independent cross-checks by finite-field linear algebra on degree truncations.

Nothing here uses Gröbner bases.  A module Cok(P) over S/I is approximated in
degrees <= D by the vector space of generator-vectors of degree <= D modulo the
span of monomial multiples of relations of degree <= D + slack.  The slack
only makes the relation span larger, so every verdict is an under-approximation
that converges as slack grows.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from math import comb

from flint import nmod_mat

from .field import PrimeField
from .modules import ExactSequenceClaim, ModuleMorphism, PresentedModule
from .poly import Polynomial

__all__ = ["Truncation", "truncated_exact_check", "macaulay_hilbert_function", "gb_hilbert_function"]


def _monomials(nvars: int, degree: int):
    """Exponent vectors of total degree exactly ``degree``."""
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for v in combo:
            e[v] += 1
        out.append(tuple(e))
    return sorted(out, reverse=True)


class Truncation:
    """Coordinates for vectors in S^rank with entries of degree <= top."""

    def __init__(self, nvars: int, top: int, rank: int):
        self.nvars, self.top, self.rank = nvars, top, rank
        self.monos = [m for d in range(top + 1) for m in _monomials(nvars, d)]
        self.index = {m: k for k, m in enumerate(self.monos)}
        self.dim = rank * len(self.monos)

    def coords(self, vec, p: int, shift=None):
        """Sparse coordinates of shift * vec, or None if some term exceeds the truncation."""
        field = PrimeField(p)
        out = {}
        for k, poly in enumerate(vec):
            for e, c in poly.items():
                if shift is not None:
                    e = tuple(a + b for a, b in zip(e, shift))
                idx = self.index.get(e)
                if idx is None:
                    return None
                val = field(c)
                if val:
                    out[k * len(self.monos) + idx] = val
        return out

    def multiples(self, vec, p: int, limit: int | None = None):
        """All monomial multiples of vec that stay inside the truncation (degree <= limit)."""
        limit = self.top if limit is None else limit
        deg = max((poly.degree() for poly in vec if not poly.is_zero()), default=0)
        rows = []
        for m in self.monos:
            if sum(m) + deg > limit:
                continue
            row = self.coords(vec, p, m)
            if row is not None and row:
                rows.append(row)
        return rows


def _mat(rows, ncols: int, p: int):
    flat = [0] * (len(rows) * ncols)
    for i, row in enumerate(rows):
        base = i * ncols
        for k, v in row.items():
            flat[base + k] = v
    return nmod_mat(len(rows), ncols, flat, p)


class _Span:
    """Row space over F_p in reduced echelon form, with vectorized reduction."""

    def __init__(self, rows, ncols: int, p: int):
        self.p, self.ncols = p, ncols
        if rows:
            R, rank = _mat(rows, ncols, p).rref()
            self.rank = rank
            entries = R.entries()
            self.R = nmod_mat(rank, ncols, entries[: rank * ncols], p) if rank else None
            self.pivots = []
            for i in range(rank):
                row = entries[i * ncols : (i + 1) * ncols]
                self.pivots.append(next(k for k, v in enumerate(row) if int(v)))
        else:
            self.rank, self.R, self.pivots = 0, None, []

    def reduce(self, V: nmod_mat) -> nmod_mat:
        if self.R is None or V.nrows() == 0:
            return V
        piv = nmod_mat(V.nrows(), self.rank, [V[i, k] for i in range(V.nrows()) for k in self.pivots], self.p)
        return V - piv * self.R

    def contains_all(self, rows) -> bool:
        if not rows:
            return True
        red = self.reduce(_mat(rows, self.ncols, self.p))
        return all(int(v) == 0 for v in red.entries())


def _relations(module: PresentedModule):
    P = module.s_matrix()
    return [c for c in P.columns() if any(not e.is_zero() for e in c)]


def _map_columns(f: ModuleMorphism):
    return f.matrix.columns()


def _matdeg(cols) -> int:
    return max((e.degree() for c in cols for e in c if not e.is_zero()), default=0)


def truncated_exact_check(claim: ExactSequenceClaim, degree: int = 12, p: int = 101, slack: int | None = None, detail=None) -> bool:
    """Check the claim degreewise up to ``degree`` by linear algebra over F_p.

    Verifies, for every spot: composites vanish, kernels of truncated maps lie in
    images plus relations, and the end conditions (injective / surjective).
    """
    mods, maps = claim.modules, claim.maps
    ring = mods[0].ring
    nv = ring.nvars
    if slack is None:
        # map images of degree-D vectors must fit; two more degrees let relations combine
        slack = max([_matdeg(_map_columns(f)) for f in maps] + [2]) + 2
    top = degree + slack

    def fail(msg):
        if detail is not None:
            detail.append(msg)
        return False

    cache = {}

    def space(module):
        key = id(module)
        if key not in cache:
            tr = Truncation(nv, top, module.ngens)
            rows = []
            for c in _relations(module):
                rows += tr.multiples(c, p)
            cache[key] = (tr, _Span(rows, tr.dim, p))
        return cache[key]

    def image_rows(f: ModuleMorphism, tr: Truncation):
        rows = []
        for c in _map_columns(f):
            rows += tr.multiples(c, p)
        return rows

    def kernel(f: ModuleMorphism):
        """Truncated kernel of f on source vectors of degree <= degree, as sparse rows."""
        src, tgt = f.source, f.target
        if src.ngens == 0:
            return [], None
        tr_src = Truncation(nv, degree, src.ngens)
        tr_tgt, rel = space(tgt)
        images = []
        for k in range(src.ngens):
            col = [f.matrix[r, k] for r in range(tgt.ngens)]
            for m in tr_src.monos:
                row = tr_tgt.coords(col, p, m) if tgt.ngens else {}
                if row is None:
                    raise ValueError("truncation too small for the map degree")
                images.append(row)
        if tgt.ngens == 0:
            n = len(images)
            return [{i: 1} for i in range(n)], tr_src
        V = rel.reduce(_mat(images, tr_tgt.dim, p))
        X, nullity = V.transpose().nullspace()
        out = []
        for j in range(nullity):
            row = {i: int(X[i, j]) for i in range(X.nrows()) if int(X[i, j])}
            if row:
                out.append(row)
        return out, tr_src

    def lift_rows(rows, tr_small: Truncation, tr_big: Truncation):
        """Re-index rows from a smaller truncation of the same rank into a bigger one."""
        nm_s, nm_b = len(tr_small.monos), len(tr_big.monos)
        out = []
        for row in rows:
            new = {}
            for k, v in row.items():
                g, idx = divmod(k, nm_s)
                new[g * nm_b + tr_big.index[tr_small.monos[idx]]] = v
            out.append(new)
        return out

    for i, f in enumerate(maps):
        if f.source.ngens == 0 or f.target.ngens == 0:
            continue
        tr_tgt, rel = space(f.target)
        # well defined: relations of the source go to relations of the target
        for c in _relations(f.source):
            img = [sum((f.matrix[r, k] * c[k] for k in range(f.source.ngens)), ring.zero()) for r in range(f.target.ngens)]
            row = tr_tgt.coords(img, p)
            if row is None:
                raise ValueError("truncation too small for relation images")
            if not rel.contains_all([row]):
                return fail(f"map {i} is not well defined in the truncation")

    for i in range(len(maps) - 1):
        f, g = maps[i], maps[i + 1]
        mid, tgt = f.target, g.target
        if tgt.ngens and f.source.ngens:
            tr_t, rel_t = space(tgt)
            comp = g.matrix * f.matrix
            rows = [tr_t.coords(c, p) for c in comp.columns()]
            if any(r is None for r in rows) or not rel_t.contains_all([r for r in rows if r]):
                return fail(f"composite at position {i + 1} is nonzero in the truncation")
        K, tr_k = kernel(g)
        if not K:
            continue
        tr_m, rel_m = space(mid)
        span = _Span(image_rows(f, tr_m) + _rows_of(rel_m), tr_m.dim, p)
        if not span.contains_all(lift_rows(K, tr_k, tr_m)):
            return fail(f"kernel not inside image at position {i + 1} (degree <= {degree})")

    if claim.left_exact and maps:
        f = maps[0]
        K, tr_k = kernel(f)
        if K:
            tr_s, rel_s = space(f.source)
            if not rel_s.contains_all(lift_rows(K, tr_k, tr_s)):
                return fail("first map has a kernel in the truncation")
    if claim.right_exact and maps:
        g = maps[-1]
        if g.target.ngens:
            tr_t, rel_t = space(g.target)
            span = _Span(image_rows(g, tr_t) + _rows_of(rel_t), tr_t.dim, p)
            units = []
            nm = len(tr_t.monos)
            for k in range(g.target.ngens):
                units.append({k * nm + tr_t.index[(0,) * nv]: 1})
            if not span.contains_all(units):
                return fail("last map is not surjective in the truncation")
    return True


def _rows_of(span: _Span):
    if span.R is None:
        return []
    out = []
    n = span.ncols
    entries = span.R.entries()
    for i in range(span.rank):
        row = {k: int(v) for k, v in enumerate(entries[i * n : (i + 1) * n]) if int(v)}
        out.append(row)
    return out


# -- Hilbert functions of homogeneous ideals ------------------------------


def macaulay_hilbert_function(gens, top: int, p: int) -> list:
    """dim_k (S/I)_d for d = 0..top from ranks of Macaulay matrices over F_p."""
    gens = [g for g in gens if not g.is_zero()]
    nv = gens[0].ring.nvars if gens else 0
    field = PrimeField(p)
    out = []
    for d in range(top + 1):
        monos = _monomials(nv, d)
        index = {m: k for k, m in enumerate(monos)}
        rows = []
        for g in gens:
            gd = g.degree()
            if gd > d:
                continue
            for m in _monomials(nv, d - gd):
                row = {}
                for e, c in g.items():
                    key = tuple(a + b for a, b in zip(e, m))
                    val = field(c)
                    if val:
                        row[index[key]] = val
                rows.append(row)
        rank = _mat(rows, len(monos), p).rank() if rows else 0
        out.append(comb(d + nv - 1, nv - 1) - rank)
    return out


def gb_hilbert_function(gb, top: int) -> list:
    """Same numbers from the leading monomials of a Gröbner basis (standard monomial count)."""
    leads = [e for _, e in gb.leading_terms()]
    nv = gb.ring.nvars
    out = []
    for d in range(top + 1):
        count = 0
        for m in _monomials(nv, d):
            if not any(all(a >= b for a, b in zip(m, lt)) for lt in leads):
                count += 1
        out.append(count)
    return out


def is_homogeneous(f: Polynomial) -> bool:
    return len({sum(e) for e, _ in f.items()}) <= 1
