from fractions import Fraction

import pytest

from chern import (
    atiyah_operator,
    atiyah_trace,
    chern_character,
    chern_closedness_check,
    obstruction_degree_check,
    one_loop_partition,
    serialize_alpha_polynomial,
    trace_cyclicity_check,
    wheel_sum,
    wheel_sum_equals_chern,
)
from linfty import AlgebraError
from scalars import FormalScalar


def test_atiyah_operator_of_e1e2(e1e2):
    assert atiyah_operator(e1e2, "e2").to_rows() == [[-1, 0], [0, 0]]
    assert chern_character(e1e2, 1, "e2") == FormalScalar.twopii(-1)


def test_ch0_is_the_superdimension(sl2, load):
    assert chern_character(sl2, 0) == 3
    assert chern_character(load("l3"), 0) == 2


@pytest.mark.parametrize("name", ["e1e2", "sl2", "l3", "abelian", "l3_trace"])
@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_wheel_lemma(load, name, n):
    report = wheel_sum_equals_chern(load(name), n)
    assert report.passed, report.failure


def test_nilpotent_atiyah_operator_has_no_traces(load):
    g = load("l3")
    for n in (1, 2, 3):
        assert chern_character(g, n).is_zero()
        assert wheel_sum(g, n) == 0


def test_partition_routes_agree_on_e1e2(e1e2):
    report = one_loop_partition(e1e2, 1)
    assert report.equal
    assert report.ahat_u_matches
    assert report.failure is None
    assert serialize_alpha_polynomial(e1e2, report.chern[2]) == [
        {"alpha": ["e2", "e2"], "coeff": [{"coeff": "1/2", "twopii": -2, "zeta": []}]}
    ]
    # ch_2·(-1/12) = t2²/(96π²), i.e. -t2²/24 in units of (2πi)^-2
    ((mono, coeff),) = report.route_b.terms.items()
    assert mono == (1, 1)
    assert coeff == FormalScalar({(-2, ()): Fraction(-1, 24)})


def test_stated_coefficient_differs_by_alternating_sign(e1e2):
    report = one_loop_partition(e1e2, 2)
    assert report.equal
    assert report.stated_sign == {2: -1, 4: 1}


@pytest.mark.parametrize("name", ["abelian", "sl2", "l3_trace"])
def test_partition_routes_agree(load, name):
    report = one_loop_partition(load(name), 2)
    assert report.equal, report.failure


def test_abelian_partition_is_zero(load):
    report = one_loop_partition(load("abelian"), 2)
    assert report.route_a == 0
    assert report.route_b == 0


def test_curved_input_is_rejected(load):
    curved = load("curved_toy")
    with pytest.raises(AlgebraError):
        one_loop_partition(curved, 1)
    with pytest.raises(AlgebraError):
        atiyah_operator(curved)


def test_partition_order_range(e1e2):
    with pytest.raises(ValueError):
        one_loop_partition(e1e2, 5)


def test_chern_characters_are_closed(sl2, e1e2):
    report = chern_closedness_check(sl2, 2)
    assert report.passed
    assert report.checked == 3
    assert chern_closedness_check(e1e2, 2).passed


def test_closedness_skips_higher_brackets(load):
    report = chern_closedness_check(load("l3"), 2)
    assert report.passed
    assert report.skipped


def test_trace_is_cyclic(sl2):
    assert trace_cyclicity_check(sl2, "e", "h", 1, 2)
    assert trace_cyclicity_check(sl2, {"e": 1, "f": 2}, "h", 2, 1)


def test_obstruction_degrees(sl2):
    report = obstruction_degree_check(sl2, 4)
    assert report.passed
    assert report.degrees[2] == 4


def test_adjoint_trace_of_e2(e1e2):
    assert atiyah_trace(e1e2, 1, "e2") == -1
    assert atiyah_trace(e1e2, 2, "e2") == 1


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_ternary_bracket_enters_the_trace(load, k):
    g = load("l3_trace")
    # At(α) acts on m alone, by t_x + t_x t_y with t_y odd
    assert atiyah_trace(g, k).terms == {(0,) * k: 1, (0,) * k + (1,): k}
    alpha = {"x": 1, "y": 1}
    assert atiyah_trace(g, k, alpha) == 2 ** k
    assert atiyah_operator(g, alpha, max_arity=2).power(k).supertrace(g.space.degrees) == 1


@pytest.mark.parametrize("name", ["abelian", "abelian1", "e1e2", "sl2", "l3", "l3_trace"])
def test_chern_characters_clear_the_obstruction_degrees(load, name):
    report = obstruction_degree_check(load(name), 6)
    assert report.passed, report.failure
    assert all(d is None or d > 2 for d in report.degrees.values())
