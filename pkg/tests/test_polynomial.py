from fractions import Fraction

from polynomial import GradedPolynomial, merge_monomials, multiset_factorial
from scalars import FormalScalar


def var(degrees, i, order=None):
    return GradedPolynomial.variable(degrees, i, order)


def test_odd_variables_anticommute_and_square_to_zero():
    degrees = (1, 1)
    x, y = var(degrees, 0), var(degrees, 1)
    assert (x * x).is_zero()
    assert y * x == -(x * y)
    assert (x * y).terms == {(0, 1): Fraction(1)}


def test_even_variables_commute():
    degrees = (1, 0)
    x, t = var(degrees, 0), var(degrees, 1)
    assert x * t == t * x
    assert (t * t).terms == {(1, 1): Fraction(1)}


def test_merge_monomials_reports_odd_repeats():
    assert merge_monomials((0,), (0,), (1,)) == (None, 0)
    assert merge_monomials((1,), (0,), (1, 1)) == ((0, 1), -1)


def test_left_derivative_signs():
    degrees = (1, 1)
    p = var(degrees, 0) * var(degrees, 1)
    assert p.left_derivative(0) == var(degrees, 1)
    assert p.left_derivative(1) == -var(degrees, 0)


def test_odd_derivation_obeys_leibniz():
    degrees = (1, 1, 2)
    images = {0: var(degrees, 2), 1: var(degrees, 2)}
    p = var(degrees, 0) * var(degrees, 1)
    assert p.apply_derivation(images, 1).terms == {(1, 2): Fraction(1), (0, 2): Fraction(-1)}


def test_truncation_counts_overflow():
    degrees = (0,)
    t = var(degrees, 0, order=2)
    cube = t * t * t
    assert cube.is_zero()
    assert cube.overflow > 0


def test_formal_coefficients():
    degrees = (0,)
    p = var(degrees, 0).scale(FormalScalar.zeta(2))
    q = p * var(degrees, 0)
    assert q.terms[(0, 0)] == FormalScalar.zeta(2)
    assert (q / FormalScalar.twopii(2)).terms[(0, 0)] == FormalScalar.rational(Fraction(-1, 24))


def test_homogeneous_degree():
    degrees = (1, 2)
    assert (var(degrees, 0) * var(degrees, 1)).homogeneous_degree() == 3
    assert (var(degrees, 0) + var(degrees, 1)).homogeneous_degree() is None


def test_multiset_factorial():
    assert multiset_factorial((0, 0, 1, 1, 1)) == 12
    assert multiset_factorial((0, 1, 2)) == 1
    assert multiset_factorial(()) == 1
