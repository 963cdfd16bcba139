"""Exact coefficient arithmetic: integers, rationals and integers mod m.

Scalars are plain Python values (``int`` for Z and Z/m, ``Fraction`` for Q)
kept in canonical form: residues live in ``[0, m)`` and fractions are always
reduced with positive denominator (the Fraction type guarantees this).
Arithmetic is exact everywhere; there is no floating point in this package.

Ring objects are immutable and hashable, scalars are immutable values, so
everything here is safe to share between threads.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class NotInvertibleError(ArithmeticError):
    """Raised when an inverse of a non-unit is requested."""


class RingParseError(ValueError):
    """Raised for malformed ring or scalar syntax."""


def _is_prime(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


class Ring:
    """Base class for the supported coefficient rings.

    Subclasses implement exact arithmetic on canonical raw values.  ``name``
    follows the command line syntax: ``Z``, ``Q``, ``Z/2``, ``Z/6``.
    """

    name: str
    is_field: bool
    is_integers: bool = False
    zero = 0

    def add(self, a, b):
        raise NotImplementedError

    def neg(self, a):
        raise NotImplementedError

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        raise NotImplementedError

    def is_unit(self, a) -> bool:
        raise NotImplementedError

    def inverse(self, a):
        raise NotImplementedError

    def pow(self, a, k: int):
        """a**k for k >= 0, with a**0 = 1 even when a = 0."""
        if k < 0:
            raise ValueError("negative exponent")
        result = self.one
        for _ in range(k):
            result = self.mul(result, a)
        return result

    def coerce(self, x):
        """Canonical ring value from an int, Fraction or ring value."""
        raise NotImplementedError

    def parse(self, text: str):
        """Parse a scalar in this ring's CLI syntax."""
        raise NotImplementedError

    def format(self, a) -> str:
        return str(a)

    def __eq__(self, other):
        return isinstance(other, Ring) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"Ring({self.name})"


class IntegerRing(Ring):
    name = "Z"
    is_field = False
    is_integers = True
    one = 1

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_unit(self, a):
        return a in (1, -1)

    def inverse(self, a):
        if a in (1, -1):
            return a
        raise NotInvertibleError(f"{a} is not a unit in Z")

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise RingParseError(f"{x} is not an integer")
            return int(x)
        return int(x)

    def parse(self, text):
        try:
            return int(text)
        except ValueError as exc:
            raise RingParseError(f"bad integer {text!r}") from exc


class RationalRing(Ring):
    name = "Q"
    is_field = True
    one = Fraction(1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_unit(self, a):
        return a != 0

    def inverse(self, a):
        if a == 0:
            raise NotInvertibleError("0 is not a unit in Q")
        return 1 / Fraction(a)

    def coerce(self, x):
        return Fraction(x)

    def parse(self, text):
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise RingParseError(f"bad rational {text!r}") from exc


class ModRing(Ring):
    """Z/m for m >= 2.  A field exactly when m is prime.

    Composite moduli are allowed for algebra arithmetic; homology routines
    reject them (that restriction is enforced at the homology API).
    """

    def __init__(self, modulus: int):
        if modulus < 2:
            raise ValueError("modulus must be >= 2")
        self.modulus = modulus
        self.name = f"Z/{modulus}"
        self.is_field = _is_prime(modulus)
        self.one = 1 % modulus

    def add(self, a, b):
        return (a + b) % self.modulus

    def neg(self, a):
        return (-a) % self.modulus

    def mul(self, a, b):
        return (a * b) % self.modulus

    def is_unit(self, a):
        return gcd(a, self.modulus) == 1

    def inverse(self, a):
        if gcd(a, self.modulus) != 1:
            raise NotInvertibleError(f"{a} is not a unit in {self.name}")
        return pow(a, -1, self.modulus)

    def pow(self, a, k):
        if k < 0:
            raise ValueError("negative exponent")
        if k == 0:
            return self.one
        return pow(a, k, self.modulus)

    def coerce(self, x):
        if isinstance(x, Fraction):
            num = x.numerator % self.modulus
            return self.mul(num, self.inverse(x.denominator % self.modulus))
        return int(x) % self.modulus

    def parse(self, text):
        try:
            return int(text) % self.modulus
        except ValueError as exc:
            raise RingParseError(f"bad residue {text!r}") from exc


ZZ = IntegerRing()
QQ = RationalRing()


def parse_ring(text: str) -> Ring:
    """Ring from its CLI name: "Z", "Q", "Z/2", "Z/6"."""
    text = text.strip()
    if text == "Z":
        return ZZ
    if text == "Q":
        return QQ
    if text.startswith("Z/"):
        try:
            m = int(text[2:])
        except ValueError as exc:
            raise RingParseError(f"bad ring {text!r}") from exc
        if m < 2:
            raise RingParseError(f"modulus must be >= 2 in {text!r}")
        return ModRing(m)
    raise RingParseError(f"unknown ring {text!r} (expected Z, Q or Z/m)")
