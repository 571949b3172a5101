"""Coefficient fields: the rationals and prime fields F_p with p < 2**31."""

from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpq

__all__ = ["Field", "QQ", "GF", "field_from_json"]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class Field:
    """Common interface; concrete fields are ``RationalField`` and ``PrimeField``.

    Coefficients are plain Python/gmpy2 numbers so that polynomial code can use
    the usual operators and only call :meth:`norm` afterwards.
    """

    characteristic = 0

    def __call__(self, value):
        raise NotImplementedError

    def norm(self, c):
        return c

    def inv(self, c):
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def to_str(self, c) -> str:
        return str(c)

    def to_json(self):
        raise NotImplementedError


class RationalField(Field):
    characteristic = 0
    zero = mpq(0)
    one = mpq(1)

    def __call__(self, value):
        if isinstance(value, Fraction):
            return mpq(value.numerator, value.denominator)
        if isinstance(value, str):
            return self.parse(value)
        return mpq(value)

    def inv(self, c):
        if c == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / c

    def parse(self, text: str):
        try:
            return mpq(text.strip())
        except ValueError as exc:
            raise ValueError(f"not a rational number: {text!r}") from exc

    def to_json(self):
        return "Q"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "QQ"


class PrimeField(Field):
    def __init__(self, p: int):
        p = int(p)
        if not (2 <= p < 2**31) or not _is_prime(p):
            raise ValueError(f"field characteristic must be a prime below 2^31, got {p}")
        self.p = p
        self.characteristic = p
        self.zero = 0
        self.one = 1

    def __call__(self, value):
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (Fraction,)) or type(value).__name__ == "mpq":
            num, den = int(value.numerator), int(value.denominator)
            if den % self.p == 0:
                raise ZeroDivisionError(f"denominator {den} vanishes mod {self.p}")
            return num * pow(den, -1, self.p) % self.p
        return int(value) % self.p

    def norm(self, c):
        return c % self.p

    def inv(self, c):
        if c % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(c, -1, self.p)

    def parse(self, text: str):
        text = text.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return self(Fraction(int(num), int(den)))
        try:
            return int(text) % self.p
        except ValueError as exc:
            raise ValueError(f"not an element of F_{self.p}: {text!r}") from exc

    def to_json(self):
        return {"Fp": self.p}

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"GF({self.p})"


QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_json(obj) -> Field:
    if obj == "Q":
        return QQ
    if isinstance(obj, dict) and set(obj) == {"Fp"}:
        return PrimeField(obj["Fp"])
    if isinstance(obj, str) and obj.startswith("Fp:"):
        return PrimeField(int(obj[3:]))
    raise ValueError(f"unknown field specification: {obj!r}")
