"""The scalar field Q(i): exactness, field axioms, text forms."""

import random
from fractions import Fraction

import pytest

from polycenters.rationals import (
    GaussianRational,
    RAT,
    rat_from_decimal,
    rat_str,
    scalar_str,
)


def test_construction_and_normalization():
    q = RAT(6, -4)
    assert q == RAT(-3, 2) and q.denominator == 2
    assert RAT(Fraction(1, 3)) == RAT(1, 3)
    assert RAT(0.25) == RAT(1, 4)  # floats are exact binary rationals


def test_decimal_parsing():
    assert rat_from_decimal("3/4") == RAT(3, 4)
    assert rat_from_decimal("0.125") == RAT(1, 8)
    assert rat_from_decimal("-7") == RAT(-7)
    assert rat_str(RAT(-3, 2)) == "-3/2"


def _rand_gr(rng):
    return GaussianRational(
        RAT(rng.randint(-9, 9), rng.randint(1, 7)),
        RAT(rng.randint(-9, 9), rng.randint(1, 7)),
    )


def test_field_axioms_randomized():
    rng = random.Random(42)
    for _ in range(4000):
        a, b, c = (_rand_gr(rng) for _ in range(3))
        assert a + b == b + a
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        if a:
            assert a * a.inverse() == GaussianRational(1)
            assert (b / a) * a == b


def test_conjugate_and_modulus():
    z = GaussianRational(RAT(3), RAT(-4))
    assert z * z.conjugate() == GaussianRational(25)
    assert z.to_complex() == 3 - 4j


def test_powers():
    i = GaussianRational(0, 1)
    assert i ** 2 == GaussianRational(-1)
    assert i ** -1 == GaussianRational(0, -1)
    assert (GaussianRational(2) ** 10) == GaussianRational(1024)


def test_exact_no_floats_in_equality():
    third = GaussianRational(RAT(1, 3))
    assert third + third + third == GaussianRational(1)
    assert not (third == GaussianRational(RAT(333333333, 1000000000)))


def test_scalar_strings():
    assert scalar_str(GaussianRational(RAT(3, 2))) == "3/2"
    assert scalar_str(GaussianRational(0, 1)) == "i"
    assert scalar_str(GaussianRational(0, -1)) == "-i"
    assert scalar_str(GaussianRational(RAT(0), RAT(3, 2))) == "3/2i"
    assert scalar_str(GaussianRational(1, 2)) == "(1+2i)"
    assert scalar_str(GaussianRational(1, -1)) == "(1-i)"


def test_from_complex_is_exact():
    z = GaussianRational.from_complex(0.5 - 0.25j)
    assert z == GaussianRational(RAT(1, 2), RAT(-1, 4))
