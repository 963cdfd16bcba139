import random
from fractions import Fraction

import pytest

from diaghom.rings import (
    ModRing,
    NotInvertibleError,
    QQ,
    RingParseError,
    ZZ,
    parse_ring,
)


def test_integer_arithmetic():
    assert ZZ.add(2, 3) == 5
    assert ZZ.mul(-4, 3) == -12
    assert ZZ.neg(7) == -7
    assert ZZ.sub(2, 5) == -3


def test_mod2_characteristic():
    F2 = ModRing(2)
    assert F2.add(1, 1) == 0
    assert F2.neg(1) == 1
    assert F2.mul(1, 1) == 1


def test_rational_fraction_reduction():
    x = QQ.mul(Fraction(1, 2), Fraction(2, 3))
    assert x == Fraction(1, 3)
    assert x.denominator == 3


def test_inverse_examples():
    assert QQ.inverse(2) == Fraction(1, 2)
    assert ModRing(5).inverse(3) == 2
    assert ZZ.inverse(-1) == -1
    with pytest.raises(NotInvertibleError):
        ZZ.inverse(2)
    with pytest.raises(NotInvertibleError):
        ModRing(4).inverse(2)
    with pytest.raises(NotInvertibleError):
        QQ.inverse(0)


def test_prime_field_all_units_invertible():
    for p in (2, 3, 5, 7):
        F = ModRing(p)
        assert F.is_field
        for a in range(1, p):
            b = F.inverse(a)
            assert F.mul(a, b) == 1
            assert F.inverse(b) == a


def test_composite_modulus_is_not_a_field():
    assert not ModRing(6).is_field
    assert ModRing(6).add(5, 5) == 4


def test_ring_axioms_on_random_triples():
    rng = random.Random(20240)
    rings = [ZZ, QQ, ModRing(2), ModRing(5), ModRing(6)]

    def sample(ring):
        if ring is QQ:
            return Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        if isinstance(ring, ModRing):
            return rng.randrange(ring.modulus)
        return rng.randint(-50, 50)

    for ring in rings:
        for _ in range(200):
            a, b, c = sample(ring), sample(ring), sample(ring)
            assert ring.add(ring.add(a, b), c) == ring.add(a, ring.add(b, c))
            assert ring.mul(ring.mul(a, b), c) == ring.mul(a, ring.mul(b, c))
            assert ring.add(a, b) == ring.add(b, a)
            assert ring.mul(a, b) == ring.mul(b, a)
            assert ring.mul(a, ring.add(b, c)) == ring.add(
                ring.mul(a, b), ring.mul(a, c)
            )
            assert ring.add(a, ring.neg(a)) == ring.zero
            assert ring.mul(a, ring.one) == a


def test_pow_zero_exponent_is_one():
    assert ZZ.pow(0, 0) == 1
    assert ModRing(3).pow(0, 0) == 1
    assert QQ.pow(Fraction(0), 0) == 1
    assert ZZ.pow(2, 5) == 32
    assert ModRing(5).pow(2, 3) == 3


def test_parse_ring():
    assert parse_ring("Z") is ZZ
    assert parse_ring("Q") is QQ
    assert parse_ring("Z/2") == ModRing(2)
    assert parse_ring("Z/6").modulus == 6
    with pytest.raises(RingParseError):
        parse_ring("Z/1")
    with pytest.raises(RingParseError):
        parse_ring("GF(4)")


def test_scalar_parsing():
    assert ZZ.parse("-7") == -7
    assert QQ.parse("1/2") == Fraction(1, 2)
    assert ModRing(5).parse("7") == 2
    with pytest.raises(RingParseError):
        ZZ.parse("x")


def test_mod_coerce_fraction():
    F5 = ModRing(5)
    assert F5.coerce(Fraction(1, 2)) == 3  # 2 * 3 = 6 = 1
    assert F5.mul(2, F5.coerce(Fraction(1, 2))) == 1
