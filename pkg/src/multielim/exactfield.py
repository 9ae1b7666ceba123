"""Exact scalar fields: the rationals and prime fields Z/p.

Polynomials and matrices store raw scalars (``int`` in ``[0, p)`` or
``fractions.Fraction``) together with a field object that knows how to
combine them.  :class:`FieldElement` wraps a raw value with its field for
use at API boundaries.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

DEFAULT_PRIME = 2**31 - 1


class FieldMismatchError(ValueError):
    """Raised when scalars from two different fields are combined."""


def _is_probable_prime(p: int) -> bool:
    if p < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if p % q == 0:
            return p == q
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for p < 3.3e24 with these bases
    for a in small:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """The field Z/p with canonical representatives in ``[0, p)``."""

    characteristic: int

    def __init__(self, p: int = DEFAULT_PRIME):
        if not _is_probable_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    @property
    def spec(self) -> str:
        return f"Fp:{self.p}"

    zero = 0
    one = 1

    def convert(self, value) -> int:
        if isinstance(value, Fraction):
            return self.div(value.numerator % self.p, value.denominator % self.p)
        return int(value) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in Z/%d" % self.p)
        return pow(a, -1, self.p)

    def div(self, a, b):
        return a * self.inv(b) % self.p

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def random(self, rng: random.Random):
        return rng.randrange(self.p)

    def parse(self, text: str) -> int:
        return self.convert(Fraction(text.strip()))

    def format(self, a) -> str:
        return str(a)


class RationalField:
    """The field Q; values are ``Fraction`` instances in lowest terms."""

    characteristic = 0
    spec = "Q"
    zero = Fraction(0)
    one = Fraction(1)

    # integer range used for random coefficients (zero excluded)
    random_bound = 9

    def __repr__(self):
        return "RationalField()"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")

    def convert(self, value) -> Fraction:
        return Fraction(value)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero in Q")
        return 1 / Fraction(a)

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in Q")
        return Fraction(a) / b

    def is_zero(self, a) -> bool:
        return a == 0

    def random(self, rng: random.Random):
        b = self.random_bound
        v = rng.randint(-b, b - 1)
        return Fraction(v if v < 0 else v + 1)

    def parse(self, text: str) -> Fraction:
        return Fraction(text.strip())

    def format(self, a) -> str:
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


QQ = RationalField()

Field = PrimeField | RationalField


def parse_field(spec: str) -> Field:
    """Parse ``"Q"`` or ``"Fp:<p>"`` (``"Fp"`` alone means 2^31 - 1)."""
    s = spec.strip()
    if s in ("Q", "QQ"):
        return QQ
    if s == "Fp":
        return PrimeField(DEFAULT_PRIME)
    if s.startswith("Fp:"):
        try:
            p = int(s[3:])
        except ValueError:
            raise ValueError(f"bad field spec {spec!r}") from None
        return PrimeField(p)
    raise ValueError(f"bad field spec {spec!r}; expected 'Q' or 'Fp:<p>'")


@dataclass(frozen=True)
class FieldElement:
    """An immutable scalar tagged with the field it lives in."""

    value: int | Fraction
    field: PrimeField | RationalField

    def __post_init__(self):
        object.__setattr__(self, "value", self.field.convert(self.value))

    @classmethod
    def parse(cls, text: str, field: Field) -> "FieldElement":
        return cls(field.parse(text), field)

    def _check(self, other) -> "FieldElement":
        if not isinstance(other, FieldElement):
            return FieldElement(other, self.field)
        if other.field != self.field:
            raise FieldMismatchError(f"cannot combine {self.field} and {other.field}")
        return other

    def __add__(self, other):
        o = self._check(other)
        return FieldElement(self.field.add(self.value, o.value), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        return FieldElement(self.field.sub(self.value, o.value), self.field)

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        o = self._check(other)
        return FieldElement(self.field.mul(self.value, o.value), self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._check(other)
        return FieldElement(self.field.div(self.value, o.value), self.field)

    def __rtruediv__(self, other):
        return self._check(other) / self

    def __neg__(self):
        return FieldElement(self.field.neg(self.value), self.field)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field.inv(self.value), self.field)

    def is_zero(self) -> bool:
        return self.field.is_zero(self.value)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value == self.field.convert(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __str__(self):
        return self.field.format(self.value)
