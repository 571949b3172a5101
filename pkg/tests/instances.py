"""Shared test instances over Q[x, y]."""

import random

from mfext import FilteredModule, Layer, PolyMatrix, Ring
from mfext.catalog import phi, psi

S = Ring(("x", "y"))
x, y = S.gens()
f1 = x**2 + y**3
f2 = x**2 + y**5


def one(p):
    return PolyMatrix.from_rows(S, [[p]])


def random_poly(rng: random.Random, degree: int = 2):
    terms = {}
    for a in range(degree + 1):
        for b in range(degree + 1 - a):
            if rng.random() < 0.5:
                terms[(a, b)] = rng.randint(-3, 3)
    return S.zero() + sum((S.monomial(e, c) for e, c in terms.items() if c), S.zero())


def random_block(seed: int, rows: int = 2, cols: int = 2) -> PolyMatrix:
    rng = random.Random(seed)
    return PolyMatrix.from_rows(S, [[random_poly(rng) for _ in range(cols)] for _ in range(rows)])


def phi_layers(block=None) -> FilteredModule:
    """Layers phi_1 for x^2 + y^3 and x^2 + y^5 with the given 2x2 extension block."""
    layers = [Layer(f1, phi(S, 2, 1), psi(S, 2, 1)), Layer(f2, phi(S, 4, 1), psi(S, 4, 1))]
    blocks = {} if block is None else {(1, 2): block}
    return FilteredModule([f1, f2], layers, blocks)


def trivial_layers(xs, block_value=1) -> FilteredModule:
    """1x1 layers (x_i) with every extension block equal to (block_value)."""
    n = len(xs)
    layers = [Layer(xi, one(xi), one(1)) for xi in xs]
    blocks = {(i, j): one(block_value) for i in range(1, n + 1) for j in range(i + 1, n + 1)}
    return FilteredModule(xs, layers, blocks)


SEEDS = [11, 23, 37, 41, 59]
