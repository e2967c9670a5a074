"""Exact scalar arithmetic: prime fields GF(p) and arbitrary-precision rationals.

Field elements are plain Python objects (ints in [0, p) for GF(p),
fractions.Fraction for the rationals); all operations go through a field
object so the rest of the library is field-agnostic.
"""

from __future__ import annotations

from fractions import Fraction

DEFAULT_PRIME = 1_073_741_789  # largest prime below 2**30; products fit in int64

_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_WITNESSES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """GF(p) with canonical representatives in [0, p)."""

    kind = "gf"

    def __init__(self, p: int = DEFAULT_PRIME):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.zero = 0
        self.one = 1 % p

    def coerce(self, value):
        if isinstance(value, Fraction):
            return self.mul(value.numerator % self.p, self.inv(value.denominator % self.p))
        return int(value) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in GF(p)")
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a) -> bool:
        return a % self.p == 0

    def rand(self, rng):
        return rng.randrange(self.p)

    def rand_nonzero(self, rng):
        return rng.randrange(1, self.p)

    def encode(self, a):
        return int(a)

    def decode(self, obj):
        return int(obj) % self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("gf", self.p))

    def __repr__(self):
        return f"GF({self.p})"


class RationalField:
    """The rationals, via fractions.Fraction."""

    kind = "qq"

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def coerce(self, value):
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
            raise ZeroDivisionError("inverse of zero")
        return 1 / Fraction(a)

    def div(self, a, b):
        return Fraction(a) / b

    def is_zero(self, a) -> bool:
        return a == 0

    def rand(self, rng):
        # small-height rationals; enough to realize "generic" choices in tests
        return Fraction(rng.randrange(-99, 100), rng.randrange(1, 20))

    def rand_nonzero(self, rng):
        while True:
            a = self.rand(rng)
            if a != 0:
                return a

    def encode(self, a):
        f = Fraction(a)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"

    def decode(self, obj):
        return Fraction(obj)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("qq")

    def __repr__(self):
        return "QQ"


def field_to_json(field) -> dict:
    if field.kind == "gf":
        return {"kind": "gf", "p": field.p}
    return {"kind": "qq"}


def field_from_json(obj) -> "PrimeField | RationalField":
    if obj["kind"] == "gf":
        return PrimeField(obj["p"])
    if obj["kind"] == "qq":
        return RationalField()
    raise ValueError(f"unknown field kind {obj['kind']!r}")
