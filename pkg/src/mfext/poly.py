"""Exact multivariate polynomials and dense polynomial matrices.

A :class:`Ring` fixes the variable names, the coefficient field and the
monomial order.  :class:`Polynomial` values are immutable and always stored in
canonical form: no zero coefficients, terms sorted from the largest monomial
down.  :class:`PolyMatrix` is a dense row-major matrix of polynomials over one
ring; 0-row and 0-column matrices are legal and present the zero module.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .field import QQ, Field

__all__ = [
    "Ring",
    "Polynomial",
    "PolyMatrix",
    "RingMismatch",
    "ShapeMismatch",
    "poly_mul",
    "mat_mul",
]

ORDERS = ("grevlex", "lex")


class RingMismatch(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


def _grevlex_key(e):
    return (sum(e),) + tuple(-a for a in reversed(e))


def _lex_key(e):
    return e


@dataclass(frozen=True)
class Ring:
    """Polynomial ring k[vars] with a monomial order."""

    vars: tuple
    field: Field = QQ
    order: str = "grevlex"

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        if self.order not in ORDERS:
            raise ValueError(f"unknown monomial order {self.order!r}")
        if len(set(self.vars)) != len(self.vars):
            raise ValueError("variable names must be distinct")
        for v in self.vars:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", v):
                raise ValueError(f"bad variable name {v!r}")

    @property
    def nvars(self) -> int:
        return len(self.vars)

    @property
    def key(self):
        return _grevlex_key if self.order == "grevlex" else _lex_key

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: self.field(c)})

    def gen(self, name_or_index) -> "Polynomial":
        i = self.vars.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial(self, {tuple(e): self.field.one})

    def gens(self):
        return tuple(self.gen(i) for i in range(self.nvars))

    def monomial(self, exps, c=1) -> "Polynomial":
        return Polynomial(self, {tuple(exps): self.field(c)})

    def __call__(self, value) -> "Polynomial":
        """Coerce ``value`` (polynomial, number or string) into this ring."""
        if isinstance(value, Polynomial):
            if value.ring != self:
                raise RingMismatch(f"{value.ring} vs {self}")
            return value
        if isinstance(value, str):
            return parse_poly(self, value)
        return self.const(value)

    def with_field(self, field: Field) -> "Ring":
        return Ring(self.vars, field, self.order)

    def to_json(self):
        return {"vars": list(self.vars), "field": self.field.to_json(), "order": self.order}

    def __repr__(self):
        return f"Ring({','.join(self.vars)}; {self.field!r}; {self.order})"


class Polynomial:
    """An element of a :class:`Ring`.

    ``terms`` maps exponent tuples to nonzero coefficients; iteration order is
    the ring's monomial order, largest first.
    """

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: Ring, terms, _canonical: bool = False):
        self.ring = ring
        self._hash = None
        if _canonical:
            self._terms = terms
            return
        norm = ring.field.norm
        clean = {}
        for e, c in terms.items():
            c = norm(c)
            if c:
                e = tuple(e)
                if len(e) != ring.nvars or any(a < 0 for a in e):
                    raise ValueError(f"bad exponent vector {e} for {ring}")
                clean[e] = c
        key = ring.key
        self._terms = {e: clean[e] for e in sorted(clean, key=key, reverse=True)}

    # -- basic queries -------------------------------------------------
    @property
    def terms(self):
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and not any(next(iter(self._terms))))

    def constant_value(self):
        return self._terms.get((0,) * self.ring.nvars, self.ring.field.zero)

    def lm(self):
        """Leading exponent vector (raises on zero)."""
        if not self._terms:
            raise ValueError("zero polynomial has no leading monomial")
        return next(iter(self._terms))

    def lc(self):
        if not self._terms:
            raise ValueError("zero polynomial has no leading coefficient")
        return next(iter(self._terms.values()))

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def monic(self) -> "Polynomial":
        return self.scale(self.ring.field.inv(self.lc()))

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring} vs {other.ring}")
            return other
        return self.ring.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        norm = self.ring.field.norm
        return Polynomial(self.ring, {e: norm(-c) for e, c in self._terms.items()}, True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Polynomial":
        c = self.ring.field(c)
        if not c:
            return self.ring.zero()
        norm = self.ring.field.norm
        return Polynomial(self.ring, {e: norm(a * c) for e, a in self._terms.items()}, True)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            if isinstance(other, PolyMatrix):
                return NotImplemented
            return self.scale(other)
        other = self._coerce(other)
        if not self._terms or not other._terms:
            return self.ring.zero()
        out = {}
        get = out.get
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                e = tuple([a + b for a, b in zip(ea, eb)])
                out[e] = get(e, 0) + ca * cb
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        if isinstance(other, (int,)):
            return self == self.ring.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self._terms.items())))
        return self._hash

    def map_coefficients(self, ring: Ring) -> "Polynomial":
        """The same polynomial read in ``ring`` (e.g. reduction of Q-coefficients mod p)."""
        if ring.vars != self.ring.vars:
            raise RingMismatch("variable names differ")
        f = ring.field
        return Polynomial(ring, {e: f(c) for e, c in self._terms.items()})

    def evaluate(self, point: Sequence):
        total = self.ring.field.zero
        for e, c in self._terms.items():
            t = c
            for a, v in zip(e, point):
                t = t * v**a
            total = total + t
        return self.ring.field.norm(total)

    # -- display -------------------------------------------------------
    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            mono = "*".join(
                v if a == 1 else f"{v}^{a}" for v, a in zip(self.ring.vars, e) if a
            )
            cs = self.ring.field.to_str(c)
            neg = cs.startswith("-")
            mag = cs[1:] if neg else cs
            if mono:
                body = mono if mag == "1" else f"{mag}*{mono}"
            else:
                body = mag
            parts.append(("-" if neg else "+", body))
        out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Polynomial({self})"


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    return a * b


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def parse_poly(ring: Ring, text: str) -> Polynomial:
    """Parse expressions such as ``"x^2 + 3/2*x*y - (y-1)^3"``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at position {pos}: {text!r}")
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num), m.start(1)))
        elif name is not None:
            if name not in ring.vars:
                raise ValueError(f"unknown variable {name!r} at position {m.start(2)}")
            tokens.append(("var", name, m.start(2)))
        else:
            tokens.append(("op", "^" if op == "**" else op, m.start(3)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    tokens.append(("end", None, len(text)))
    i = 0

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        tok = tokens[i]
        i += 1
        return tok

    def fail(msg):
        raise ValueError(f"{msg} at position {peek()[2]} in {text!r}")

    def expr():
        val = term()
        while peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            rhs = term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term():
        val = unary()
        while True:
            kind, v, _ = peek()
            if kind == "op" and v == "*":
                take()
                val = val * unary()
            elif kind == "op" and v == "/":
                take()
                den = unary()
                if not den.is_constant() or den.is_zero():
                    fail("division only by nonzero constants")
                val = val.scale(ring.field.inv(den.constant_value()))
            elif kind in ("num", "var") or (kind == "op" and v == "("):
                val = val * unary()
            else:
                return val

    def unary():
        if peek()[0] == "op" and peek()[1] in "+-":
            op = take()[1]
            val = unary()
            return -val if op == "-" else val
        return power()

    def power():
        base = atom()
        if peek()[0] == "op" and peek()[1] == "^":
            take()
            kind, v, _ = peek()
            if kind != "num":
                fail("exponent must be a non-negative integer")
            take()
            base = base**v
        return base

    def atom():
        kind, v, _ = peek()
        if kind == "num":
            take()
            return ring.const(v)
        if kind == "var":
            take()
            return ring.gen(v)
        if kind == "op" and v == "(":
            take()
            val = expr()
            if peek() != ("op", ")", peek()[2]):
                fail("expected ')'")
            take()
            return val
        fail("unexpected token")

    result = expr()
    if peek()[0] != "end":
        fail("trailing input")
    return result


# ---------------------------------------------------------------------------
# matrices


class PolyMatrix:
    """Dense m x n matrix of polynomials over one ring (row-major, immutable)."""

    __slots__ = ("ring", "rows", "cols", "_e", "_hash")

    def __init__(self, ring: Ring, rows: int, cols: int, entries=None):
        self.ring = ring
        self.rows = int(rows)
        self.cols = int(cols)
        self._hash = None
        if self.rows < 0 or self.cols < 0:
            raise ShapeMismatch("negative dimension")
        if entries is None:
            z = ring.zero()
            self._e = tuple(tuple(z for _ in range(self.cols)) for _ in range(self.rows))
            return
        rows_ = []
        for row in entries:
            row = tuple(ring(a) for a in row)
            if len(row) != self.cols:
                raise ShapeMismatch(f"row of length {len(row)} in a {self.rows}x{self.cols} matrix")
            rows_.append(row)
        if len(rows_) != self.rows:
            raise ShapeMismatch(f"{len(rows_)} rows given for a {self.rows}x{self.cols} matrix")
        self._e = tuple(rows_)

    # -- construction helpers -----------------------------------------
    @classmethod
    def from_rows(cls, ring: Ring, rows, cols: int | None = None) -> "PolyMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ShapeMismatch("column count needed for a matrix with no rows")
            cols = len(rows[0])
        return cls(ring, len(rows), cols, rows)

    @classmethod
    def from_columns(cls, ring: Ring, columns, rows: int) -> "PolyMatrix":
        columns = [list(c) for c in columns]
        for c in columns:
            if len(c) != rows:
                raise ShapeMismatch("column of wrong length")
        return cls(ring, rows, len(columns), [[c[i] for c in columns] for i in range(rows)])

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "PolyMatrix":
        one, zero = ring.one(), ring.zero()
        return cls(ring, n, n, [[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ring: Ring, rows: int, cols: int) -> "PolyMatrix":
        return cls(ring, rows, cols)

    @classmethod
    def scalar(cls, ring: Ring, n: int, p) -> "PolyMatrix":
        p = ring(p)
        zero = ring.zero()
        return cls(ring, n, n, [[p if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def block(cls, ring: Ring, blocks, row_sizes=None, col_sizes=None) -> "PolyMatrix":
        """Assemble from a grid of blocks; ``None`` or ``0`` entries are zero blocks."""
        nbr = len(blocks)
        nbc = len(blocks[0]) if nbr else len(col_sizes or [])
        rs = list(row_sizes) if row_sizes is not None else [None] * nbr
        cs = list(col_sizes) if col_sizes is not None else [None] * nbc
        for bi, brow in enumerate(blocks):
            for bj, b in enumerate(brow):
                if isinstance(b, PolyMatrix):
                    if rs[bi] is None:
                        rs[bi] = b.rows
                    if cs[bj] is None:
                        cs[bj] = b.cols
                    if rs[bi] != b.rows or cs[bj] != b.cols:
                        raise ShapeMismatch(f"block ({bi},{bj}) has shape {b.shape}")
        if any(s is None for s in rs + cs):
            raise ShapeMismatch("block sizes undetermined")
        zero = ring.zero()
        out = [[zero] * sum(cs) for _ in range(sum(rs))]
        r0 = 0
        for bi, brow in enumerate(blocks):
            c0 = 0
            for bj, b in enumerate(brow):
                if isinstance(b, PolyMatrix):
                    if b.ring != ring:
                        raise RingMismatch("block over a different ring")
                    for i in range(b.rows):
                        out[r0 + i][c0 : c0 + b.cols] = b._e[i]
                c0 += cs[bj]
            r0 += rs[bi]
        return cls(ring, sum(rs), sum(cs), out)

    @staticmethod
    def block_diag(ring: Ring, mats) -> "PolyMatrix":
        mats = list(mats)
        grid = [[m if i == j else None for j in range(len(mats))] for i, m in enumerate(mats)]
        return PolyMatrix.block(
            ring, grid, [m.rows for m in mats], [m.cols for m in mats]
        ) if mats else PolyMatrix(ring, 0, 0)

    @staticmethod
    def hstack(ring: Ring, mats, rows: int | None = None) -> "PolyMatrix":
        mats = list(mats)
        if not mats:
            return PolyMatrix(ring, rows or 0, 0)
        return PolyMatrix.block(ring, [mats], [rows if rows is not None else mats[0].rows], [m.cols for m in mats])

    @staticmethod
    def vstack(ring: Ring, mats, cols: int | None = None) -> "PolyMatrix":
        mats = list(mats)
        if not mats:
            return PolyMatrix(ring, 0, cols or 0)
        return PolyMatrix.block(ring, [[m] for m in mats], [m.rows for m in mats], [cols if cols is not None else mats[0].cols])

    # -- access ---------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self._e[i][j]

    def row(self, i):
        return self._e[i]

    def column(self, j):
        return tuple(r[j] for r in self._e)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def entries(self):
        return self._e

    def submatrix(self, rows, cols) -> "PolyMatrix":
        rows = list(rows)
        cols = list(cols)
        return PolyMatrix(self.ring, len(rows), len(cols), [[self._e[i][j] for j in cols] for i in rows])

    def with_entry(self, i, j, value) -> "PolyMatrix":
        e = [list(r) for r in self._e]
        e[i][j] = self.ring(value)
        return PolyMatrix(self.ring, self.rows, self.cols, e)

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix(self.ring, self.rows, self.cols, [[fn(a) for a in r] for r in self._e])

    def map_ring(self, ring: Ring) -> "PolyMatrix":
        return PolyMatrix(ring, self.rows, self.cols, [[a.map_coefficients(ring) for a in r] for r in self._e])

    @property
    def T(self) -> "PolyMatrix":
        return PolyMatrix(self.ring, self.cols, self.rows, [list(c) for c in zip(*self._e)] if self.rows else [[] for _ in range(self.cols)])

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self._e for a in r)

    def max_degree(self) -> int:
        return max((a.degree() for r in self._e for a in r), default=-1)

    # -- arithmetic ----------------------------------------------------
    def _check(self, other):
        if not isinstance(other, PolyMatrix):
            raise TypeError("expected a PolyMatrix")
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other):
        self._check(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} + {other.shape}")
        return PolyMatrix(self.ring, self.rows, self.cols, [[a + b for a, b in zip(r, s)] for r, s in zip(self._e, other._e)])

    def __neg__(self):
        return self.map(lambda a: -a)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PolyMatrix):
            return mat_mul(self, other)
        p = self.ring(other)
        return self.map(lambda a: a * p)

    def __rmul__(self, other):
        p = self.ring(other)
        return self.map(lambda a: p * a)

    def __eq__(self, other):
        return (
            isinstance(other, PolyMatrix)
            and self.ring == other.ring
            and self.shape == other.shape
            and self._e == other._e
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.rows, self.cols, self._e))
        return self._hash

    def __repr__(self):
        body = "; ".join(", ".join(str(a) for a in r) for r in self._e)
        return f"PolyMatrix({self.rows}x{self.cols}: [{body}])"


def mat_mul(a: PolyMatrix, b: PolyMatrix) -> PolyMatrix:
    if a.ring != b.ring:
        raise RingMismatch(f"{a.ring} vs {b.ring}")
    if a.cols != b.rows:
        raise ShapeMismatch(f"cannot multiply {a.shape} by {b.shape}")
    ring = a.ring
    zero = ring.zero()
    bcols = b.columns()
    out = []
    for r in a._e:
        row = []
        for c in bcols:
            acc = zero
            for x, y in zip(r, c):
                if x and y:
                    acc = acc + x * y
            row.append(acc)
        out.append(row)
    return PolyMatrix(ring, a.rows, b.cols, out)
