import cmath
import math
from fractions import Fraction

import pytest

from scalars import (
    TWO_PI_I,
    FormalScalar,
    bernoulli,
    evaluate_numeric,
    format_rational,
    parse_rational,
    scalar_normalize,
)


def test_bernoulli_numbers():
    assert bernoulli(2) == Fraction(1, 6)
    assert bernoulli(4) == Fraction(-1, 30)
    assert bernoulli(12) == Fraction(-691, 2730)


def test_even_zeta_values_reduce_to_rationals():
    assert scalar_normalize(FormalScalar.zeta(2) * FormalScalar.twopii(-2)) == FormalScalar.rational(Fraction(-1, 24))
    assert scalar_normalize(FormalScalar.zeta(4) * FormalScalar.twopii(-4)) == FormalScalar.rational(Fraction(1, 1440))


def test_odd_zeta_stays_symbolic():
    s = FormalScalar.zeta(3) * 2
    assert s.has_symbolic_zeta
    assert not s.is_rational()
    assert s.to_records() == [{"coeff": "2/1", "twopii": 0, "zeta": [3]}]


def test_normalize_is_idempotent():
    s = FormalScalar.zeta(2) * FormalScalar.zeta(4) + FormalScalar.zeta(5)
    once = scalar_normalize(s)
    assert scalar_normalize(once).terms == once.terms


def test_numeric_evaluation():
    assert cmath.isclose(evaluate_numeric(FormalScalar.zeta(2)), math.pi ** 2 / 6)
    assert cmath.isclose(evaluate_numeric(FormalScalar.twopii(2)), TWO_PI_I ** 2)
    assert cmath.isclose(evaluate_numeric(Fraction(1, 3)), 1 / 3)


def test_division_by_powers_of_two_pi_i():
    s = FormalScalar.twopii(3) / FormalScalar.twopii(2)
    assert s == FormalScalar.twopii(1)


def test_rational_text():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert parse_rational(4) == Fraction(4)
    assert format_rational(Fraction(4)) == "4/1"
    with pytest.raises(ValueError):
        parse_rational("one half")


def test_records_round_trip_through_normal_form():
    s = FormalScalar.zeta(2) + FormalScalar.twopii(-1) * Fraction(3, 4)
    assert FormalScalar.from_records(s.to_records()) == s


RING_SAMPLES = [
    FormalScalar.rational(Fraction(-3, 2)),
    FormalScalar.zeta(2) * 3,
    FormalScalar.zeta(3) + FormalScalar.twopii(-2),
    FormalScalar.twopii(1) * Fraction(5, 7) + FormalScalar.zeta(5) * FormalScalar.zeta(4),
]


@pytest.mark.parametrize("a", RING_SAMPLES)
@pytest.mark.parametrize("b", RING_SAMPLES)
def test_ring_axioms(a, b):
    c = FormalScalar.zeta(3) * FormalScalar.twopii(2) - 1
    zero, one = FormalScalar(), FormalScalar.rational(1)
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + zero == a
    assert a * one == a
    assert (a - a).is_zero()
    assert scalar_normalize(scalar_normalize(a * b)).terms == scalar_normalize(a * b).terms
