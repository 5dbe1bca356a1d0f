import math
from fractions import Fraction

import pytest

from genus import (
    GenusSeries,
    ahat_series,
    ahat_u_coefficient,
    ahat_u_series,
    evaluate_at_one,
    genus_in_chern,
    log_ahat_in_chern,
    pwrsrs_identity_check,
    series_exp,
    series_inverse,
    series_log,
    todd_ahat_relation_check,
    todd_series,
)
from scalars import FormalScalar, scalar_normalize


def test_todd_and_ahat_coefficients():
    todd = todd_series(4)
    assert todd.coefficients == [1, Fraction(1, 2), Fraction(1, 12), 0, Fraction(-1, 720)]
    ahat = ahat_series(4)
    assert ahat.coefficients == [1, 0, Fraction(-1, 24), 0, Fraction(7, 5760)]


def test_power_series_identity_through_order_30():
    report = pwrsrs_identity_check(30)
    assert report.passed, report.failure
    assert report.lhs[2] == Fraction(-1, 24)
    assert report.lhs[4] == Fraction(1, 2880)
    assert all(c == 0 for c in report.lhs[1::2])


def test_identity_order_must_be_even_and_bounded():
    with pytest.raises(ValueError):
        pwrsrs_identity_check(5)
    with pytest.raises(ValueError):
        pwrsrs_identity_check(32)


def test_todd_ahat_relation():
    assert todd_ahat_relation_check(20)


def test_log_exp_inverse():
    todd = todd_series(10)
    assert series_exp(series_log(todd)) == todd
    assert series_inverse(todd) * todd == GenusSeries([1], 10)
    with pytest.raises(ValueError):
        series_log(GenusSeries([0, 1], 3))


def test_log_ahat_in_chern_basis():
    assert log_ahat_in_chern(2) == {2: Fraction(-1, 12), 4: Fraction(1, 120)}


def test_genus_in_chern_uses_power_sums():
    # f = 1 + x^3/2 has log f = x^3/2 through x^3, and Σ_r x_r^3 = 3!·ch_3
    assert genus_in_chern(GenusSeries([1, 0, 0, Fraction(1, 2)])) == {3: 3}
    with pytest.raises(ValueError):
        genus_in_chern(GenusSeries([0, 1]))


def test_newton_identities_agree_with_series_log():
    ahat = ahat_series(12)
    log_ahat = series_log(ahat)
    expected = {m: log_ahat[m] * math.factorial(m) for m in range(1, 13) if log_ahat[m] != 0}
    assert genus_in_chern(ahat) == expected
    assert set(expected) == {2, 4, 6, 8, 10, 12}


def test_newton_identities_on_a_linear_factor():
    # log(1 + x/3) = Σ (-1)^{m-1} x^m / (3^m m)
    got = genus_in_chern(GenusSeries([1, Fraction(1, 3)], 4))
    assert got == {m: Fraction((-1) ** (m - 1) * math.factorial(m), 3**m * m) for m in range(1, 5)}


def test_ahat_u_weights():
    assert scalar_normalize(ahat_u_coefficient(1)) == FormalScalar.rational(Fraction(-1, 12))
    assert scalar_normalize(ahat_u_coefficient(2)) == FormalScalar.rational(Fraction(1, 120))


def test_ahat_u_series_at_one():
    series = ahat_u_series({2: Fraction(3), 4: Fraction(0)}, 2)
    assert series.order == 4
    assert evaluate_at_one(series) == Fraction(-1, 4)
