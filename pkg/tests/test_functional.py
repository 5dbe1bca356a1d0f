import math
from fractions import Fraction

import pytest

from analytic import ModeModel
from functional import (
    FieldSpace,
    Functional,
    FunctionalError,
    apply_q,
    bracket,
    bv_bracket,
    bv_kernel,
    bv_laplacian,
    chern_simons_functional,
    classical_master_residual,
    gm_weight_report,
    harmonic_restriction_check,
    kernel_reach,
    master_report,
    naive_quantization,
    one_form_window,
    propagator_kernel,
    qme_report,
    random_functional,
    rg_flow,
    tree_level_on_harmonics,
)
from graded import contract
from linfty import AlgebraError, double


@pytest.fixture
def space(e1e2):
    return FieldSpace(ModeModel(1), double(e1e2))


def linear(space, x):
    F = Functional(space)
    F.add_word(0, [x], Fraction(1))
    return F


def test_fields_need_a_pairing(e1e2):
    with pytest.raises(FunctionalError):
        FieldSpace(ModeModel(1), e1e2)


def test_field_space_layout(space):
    assert space.size == 3 * 2 * 4
    x = space.coordinate(0, 0, 0)
    assert space.parities[x] == 1
    assert space.parities[space.coordinate(0, 1, 0)] == 0
    assert space.beta == frozenset({2, 3})


def test_odd_coordinates_square_to_zero(space):
    F = Functional(space)
    x = space.coordinate(1, 0, 0)
    F.add_word(0, [x, x], 1)
    assert F.is_zero()


def test_laplacian_of_a_quadratic(space):
    x, y = space.coordinate(0, 0, 0), space.coordinate(0, 1, 2)
    F = Functional(space)
    F.add_word(0, [x, y], Fraction(1))
    K = bv_kernel(space)
    assert bv_laplacian(K, F).terms == {(0, ()): 1}
    assert bv_bracket(K, linear(space, x), linear(space, y)).terms == {(0, ()): -1}
    assert bv_bracket(K, linear(space, y), linear(space, x)).terms == {(0, ()): 1}


def test_laplacian_needs_an_odd_kernel(space):
    P = propagator_kernel(space, 0.1, 1.0)
    with pytest.raises(FunctionalError):
        bv_laplacian(P, Functional(space))


def test_laplacian_squares_to_zero(space):
    K = bv_kernel(space, 0.1)
    F = random_functional(space, 4, 12, seed=1)
    assert bv_laplacian(K, bv_laplacian(K, F)).norm() < 1e-12


def test_laplacian_anticommutes_with_q(space):
    K = bv_kernel(space, 0.1)
    for seed in (2, 3):
        F = random_functional(space, 3, 12, seed=seed, parity=seed % 2)
        defect = apply_q(bv_laplacian(K, F)) + bv_laplacian(K, apply_q(F))
        assert defect.norm() < 1e-10


def test_bracket_jacobi_identity(space):
    K = bv_kernel(space, 0.1)
    F, G, H = (random_functional(space, 2, 5, seed=s) for s in (4, 5, 6))
    lhs = bracket(K, F, bracket(K, G, H))
    rhs = bracket(K, bracket(K, F, G), H) - bracket(K, G, bracket(K, F, H))
    assert (lhs - rhs).norm() < 1e-10


def test_q_differentiates_one_forms(space):
    x = space.coordinate(1, 1, 0)
    image = apply_q(linear(space, x))
    ((key, value),) = image.terms.items()
    assert key == (0, (space.coordinate(1, 0, 0),))
    assert value == pytest.approx(2j * math.pi)


@pytest.mark.parametrize("name", ["abelian", "e1e2", "sl2", "l3", "l3_trace"])
def test_classical_master_equation(load, name):
    assert classical_master_residual(double(load(name))).is_zero()


def test_chern_simons_functional_has_weight_one(space):
    I = chern_simons_functional(space)
    assert not I.is_zero()
    assert all(len(mono) == 3 for _, mono in I.terms)
    assert gm_weight_report(I).passed


def test_curved_algebras_have_no_chern_simons_functional(load):
    space = FieldSpace(ModeModel(0), double(load("curved_toy")))
    with pytest.raises(AlgebraError):
        chern_simons_functional(space)


def test_flow_rejects_quadratic_input(space):
    F = Functional(space)
    F.add_word(0, [space.coordinate(0, 0, 0), space.coordinate(0, 1, 2)], 1)
    with pytest.raises(FunctionalError, match="cubic"):
        rg_flow(propagator_kernel(space, 0.0, 1.0), F, 2)
    with pytest.raises(FunctionalError):
        rg_flow(bv_kernel(space), chern_simons_functional(space), 2)


def test_flow_semigroup(space):
    I = chern_simons_functional(space)
    staged = rg_flow(propagator_kernel(space, 0.1, 1.0), rg_flow(propagator_kernel(space, 0.0, 0.1), I, 2), 2)
    direct = rg_flow(propagator_kernel(space, 0.0, 1.0), I, 2)
    assert (staged - direct).norm() < 1e-9
    assert direct.max_degree() <= 4


def test_naive_quantization_is_weight_one(space):
    I = naive_quantization(space, 1.0, 2)
    report = gm_weight_report(I)
    assert report.passed, report.failure
    assert I.hbar_part(2).is_zero()


def test_weight_report_failures(space):
    F = Functional(space)
    F.add_word(2, [space.coordinate(0, 0, 0)], 1)
    assert not gm_weight_report(F).passed
    G = Functional(space)
    G.add_word(0, [space.coordinate(0, 0, 0), space.coordinate(0, 1, 1), space.coordinate(1, 0, 1)], 1)
    assert "β-legs" in gm_weight_report(G).failure


def test_tree_level_matches_on_harmonic_fields(space):
    flowed, classical = tree_level_on_harmonics(space, 2)
    assert not classical.is_zero()
    assert (flowed - classical).is_zero()


@pytest.mark.parametrize("parities", [(1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 1, 1), (1, 1, 1)])
def test_bracket_jacobi_identity_with_odd_entries(space, parities):
    K = bv_kernel(space, 0.1)
    F, G, H = (random_functional(space, 2, 5, seed=7 + i, parity=p) for i, p in enumerate(parities))
    sign = -1 if (parities[0] + 1) * (parities[1] + 1) % 2 else 1
    lhs = bracket(K, F, bracket(K, G, H))
    rhs = bracket(K, bracket(K, F, G), H) + bracket(K, G, bracket(K, F, H)).scale(sign)
    assert (lhs - rhs).norm() < 1e-10


def test_bracket_is_graded_antisymmetric(space):
    K = bv_kernel(space, 0.1)
    for p, q in ((0, 0), (1, 0), (1, 1)):
        F = random_functional(space, 2, 6, seed=20 + p, parity=p)
        G = random_functional(space, 3, 6, seed=30 + q, parity=q)
        sign = -1 if (p + 1) * (q + 1) % 2 else 1
        assert (bracket(K, F, G) + bracket(K, G, F).scale(sign)).norm() < 1e-10


def test_casimir_inverts_the_pairing(sl2):
    space = FieldSpace(ModeModel(0), double(sl2))
    unit = contract(space.pairing, space.casimir, [(1, 0)])
    assert unit.entries == {(a, a): Fraction(1) for a in range(6)}
    assert space.casimir.degree == 2


def test_kernel_reach():
    assert kernel_reach(ModeModel(4), 1.0) == 0
    assert kernel_reach(ModeModel(4), 0.01) == 4
    assert kernel_reach(ModeModel(4), math.inf) == 0


def test_window_components_flow_exactly(space):
    window = one_form_window(space, 0)
    P = propagator_kernel(space, 0.0, 1.0)
    full = rg_flow(P, chern_simons_functional(space), 2)
    windowed = rg_flow(P, chern_simons_functional(space, reach=0), 2, window)
    assert not windowed.is_zero()
    assert (full.select(window) - windowed).norm() < 1e-12


def test_windowed_flow_semigroup(space):
    window = one_form_window(space, 0)
    I = chern_simons_functional(space, reach=0)
    first = rg_flow(propagator_kernel(space, 0.0, 0.1), I, 2, window)
    staged = rg_flow(propagator_kernel(space, 0.1, 1.0), first, 2, window)
    direct = rg_flow(propagator_kernel(space, 0.0, 1.0), I, 2, window)
    assert (staged - direct).norm() < 1e-9


def test_quantum_master_equation_on_sl2(sl2):
    space = FieldSpace(ModeModel(2), double(sl2))
    report = qme_report(space, 1.0, 2)
    assert report.passed, report.failure
    assert report.reach == 0
    assert report.tree_level <= 1e-6
    assert report.one_loop <= 1e-6
    assert report.terms_checked > 0


def test_master_report_catches_a_one_loop_defect(sl2):
    space = FieldSpace(ModeModel(1), double(sl2))
    clean = naive_quantization(space, 1.0, 4, reach=0)
    assert master_report(space, clean, 1.0, 4).passed
    zero_modes = [x for x, (k, f, c) in enumerate(space.coordinates) if k == 0]
    extra = Functional(space)
    for i in range(4):
        extra.add_word(1, [zero_modes[i], zero_modes[-1 - i]], 0.1 * (i + 1))
    report = master_report(space, clean + extra, 1.0, 4)
    assert not report.passed
    assert "one-loop" in report.failure
    assert report.one_loop > 1e-3


def test_harmonic_restriction_at_degree_four(sl2):
    report = harmonic_restriction_check(FieldSpace(ModeModel(4), double(sl2)), 4)
    assert report.passed, report.failure
    assert report.kernel_on_harmonic == 0
    assert report.difference == 0.0
    assert report.terms_checked > 0


@pytest.mark.slow
def test_quantum_master_equation_at_full_size(sl2):
    space = FieldSpace(ModeModel(32), double(sl2))
    report = qme_report(space, 1.0, 4)
    assert report.passed, report.failure
    assert report.one_loop <= 1e-6


@pytest.mark.slow
def test_windowed_flow_semigroup_at_full_size(sl2):
    space = FieldSpace(ModeModel(32), double(sl2))
    window = one_form_window(space, 0)
    I = chern_simons_functional(space, reach=0)
    first = rg_flow(propagator_kernel(space, 0.0, 0.1), I, 4, window)
    staged = rg_flow(propagator_kernel(space, 0.1, 1.0), first, 4, window)
    direct = rg_flow(propagator_kernel(space, 0.0, 1.0), I, 4, window)
    assert (staged - direct).norm() < 1e-9
