"""
Chern Characters of Bg
Atiyah operator from the brackets, Chern characters, the wheel-sum lemma and the one-loop partition function
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from analytic import wheel_trace_target
from genus import ahat_u_series, evaluate_at_one, log_ahat_in_chern
from graded import is_zero
from graphs import GradedMatrix, automorphism_order, enumerate_wheels, lie_weight
from linfty import AlgebraError, LInftyAlgebra
from polynomial import GradedPolynomial
from scalars import FormalScalar

logger = logging.getLogger(__name__)

MAX_WHEEL = 8


def alpha_degrees(g: LInftyAlgebra) -> tuple:
    """Degrees of the coordinates t_j in α = Σ t_j e_j, making α of total degree 2"""
    return tuple(2 - d for d in g.space.degrees)


def symbolic_alpha(g: LInftyAlgebra) -> Dict[int, GradedPolynomial]:
    degrees = alpha_degrees(g)
    return {j: GradedPolynomial.variable(degrees, j) for j in range(g.dim)}


def _alpha_vector(g: LInftyAlgebra, alpha) -> Dict[int, object]:
    if alpha is None:
        return symbolic_alpha(g)
    if isinstance(alpha, str):
        return {g.space.index(alpha): Fraction(1)}
    return {(g.space.index(k) if isinstance(k, str) else k): v for k, v in alpha.items()}


def atiyah_operator(g: LInftyAlgebra, alpha=None, max_arity: Optional[int] = None) -> GradedMatrix:
    """
    At(α) = Σ_{n≥2} B_n(α)/(n-1)! with B_n(α): m ↦ ℓ_n(α, ..., α, m), read off
    the bracket tensors (row = output). α defaults to the generic element Σ t_j e_j.
    """
    if g.is_curved:
        raise AlgebraError(f"the Atiyah operator is read off an uncurved algebra ({g.name or 'algebra'} has ℓ0 ≠ 0)")
    max_arity = g.max_arity if max_arity is None else max_arity
    vector = _alpha_vector(g, alpha)
    entries: Dict[tuple, object] = {}
    for n in range(2, max_arity + 1):
        if not g.brackets.get(n):
            continue
        weight = Fraction(1, math.factorial(n - 1))
        for (i, *args, m), c in g.bracket_tensor(n).entries.items():
            if any(j not in vector for j in args):
                continue
            coeff = 1
            for j in args:
                coeff = coeff * vector[j]
            entries[(i, m)] = entries.get((i, m), 0) + coeff * (c * weight)
    return GradedMatrix.from_entries(g.dim, entries)


def atiyah_trace(g: LInftyAlgebra, k: int, alpha=None):
    """str(At(α)^k)"""
    return atiyah_operator(g, alpha).power(k).supertrace(g.space.degrees)


def chern_factor(k: int) -> FormalScalar:
    """1/(k!(-2πi)^k)"""
    return FormalScalar({(-k, ()): Fraction((-1) ** k, math.factorial(k))})


def chern_character(g: LInftyAlgebra, k: int, alpha=None):
    """
    ch_k = str(At^k)/(k!(-2πi)^k), an α-polynomial with FormalScalar
    coefficients (a FormalScalar when α is a fixed element).
    """
    if k < 0:
        raise ValueError(f"Chern characters are indexed by k ≥ 0, got {k}")
    if k == 0:
        return FormalScalar.rational(sum(-1 if d % 2 else 1 for d in g.space.degrees))
    value = atiyah_trace(g, k, alpha)
    if is_zero(value):
        return FormalScalar()
    return value * chern_factor(k)


def values_equal(a, b) -> bool:
    """Exact equality for mixed Fraction / FormalScalar / α-polynomial values"""
    return is_zero(a - b)


def wheel_sum(g: LInftyAlgebra, n: int, alpha=None):
    """Σ over n-wheel classes of W^Lie_γ(α, ..., α)/|Aut γ| with unlabeled tails"""
    if n < 1 or n > MAX_WHEEL:
        raise ValueError(f"wheel size must lie in 1..{MAX_WHEEL}, got {n}")
    if g.is_curved:
        raise AlgebraError(f"wheel sums need ℓ0 = 0 ({g.name or 'algebra'} is curved)")
    vector = _alpha_vector(g, alpha)
    total = 0
    for wheel in enumerate_wheels(n, g.max_arity + 1):
        weight = lie_weight(wheel, g, [vector] * len(wheel.tails))
        if is_zero(weight):
            continue
        total = total + weight * Fraction(1, automorphism_order(wheel))
    return total


@dataclass
class WheelReport:
    algebra: str
    n: int
    passed: bool
    graph_side: object
    trace_side: object
    failure: Optional[str] = None


def wheel_sum_equals_chern(g: LInftyAlgebra, n: int) -> WheelReport:
    """Σ_γ W^Lie_γ/|Aut γ| = (1/n)str(At^n) = (n-1)!(-2πi)^n ch_n as α-polynomials"""
    graph_side = wheel_sum(g, n)
    trace_side = atiyah_trace(g, n) * Fraction(1, n)
    chern_side = chern_character(g, n) * FormalScalar({(n, ()): (-1) ** n * math.factorial(n - 1)})
    failure = None
    if not values_equal(graph_side, trace_side):
        failure = f"wheel sum {graph_side} differs from str(At^{n})/{n} = {trace_side}"
    elif not values_equal(trace_side, chern_side):
        failure = f"(n-1)!(-2πi)^n ch_{n} = {chern_side} differs from str(At^{n})/{n}"
    logger.info("wheel lemma for %s at n=%d: %s", g.name, n, "holds" if failure is None else failure)
    return WheelReport(g.name, n, failure is None, graph_side, trace_side, failure)


def stated_coefficient(k: int) -> FormalScalar:
    """2(2k-1)!ζ(2k)/(2π)^{2k}, written with (2π)^{2k} = (-1)^k(2πi)^{2k}"""
    return FormalScalar({(-2 * k, (2 * k,)): 2 * math.factorial(2 * k - 1) * (-1) ** k})


@dataclass
class PartitionReport:
    """I^(1)[∞] on harmonic fields, assembled by the graph route and the genus route"""

    algebra: str
    max_k: int
    equal: bool
    route_a: object
    route_b: object
    chern: Dict[int, object] = field(default_factory=dict)
    per_k: Dict[int, Dict[str, object]] = field(default_factory=dict)
    ahat_u_matches: bool = True
    stated_sign: Dict[int, int] = field(default_factory=dict)
    failure: Optional[str] = None


def one_loop_partition(g: LInftyAlgebra, max_k: int) -> PartitionReport:
    """
    Route (a): Σ_{even n ≤ 2max_k} (2ζ(n)/(2π)^{2n})·(wheel sum over n-wheels).
    Route (b): log Â in the ch basis, Σ_k c_{2k}(2k)!·ch_{2k}.
    Odd wheels carry a zero analytic trace and drop out of route (a).
    """
    if max_k < 1 or max_k > 4:
        raise ValueError(f"max_k must lie in 1..4, got {max_k}")
    if g.is_curved:
        raise AlgebraError(f"the one-loop partition function needs ℓ0 = 0 ({g.name or 'algebra'} is curved)")
    genus_coefficients = log_ahat_in_chern(max_k)
    route_a, route_b = 0, 0
    chern: Dict[int, object] = {}
    per_k: Dict[int, Dict[str, object]] = {}
    stated_sign: Dict[int, int] = {}
    for k in range(1, max_k + 1):
        n = 2 * k
        wheels = wheel_sum(g, n)
        graph_part = wheel_trace_target(n) * wheels if not is_zero(wheels) else 0
        ch = chern_character(g, n)
        chern[n] = ch
        genus_part = ch * genus_coefficients.get(n, Fraction(0)) if not is_zero(ch) else 0
        stated_part = ch * stated_coefficient(k) if not is_zero(ch) else 0
        route_a = route_a + graph_part
        route_b = route_b + genus_part
        if values_equal(stated_part, genus_part):
            stated_sign[n] = 1
        elif values_equal(stated_part, -genus_part):
            stated_sign[n] = -1
        else:
            stated_sign[n] = 0
        per_k[n] = {"graph": graph_part, "genus": genus_part, "stated": stated_part}

    u_series = ahat_u_series(chern, max_k)
    ahat_u_matches = values_equal(evaluate_at_one(u_series), route_b)
    equal = values_equal(route_a, route_b)
    failure = None
    if not equal:
        failure = f"graph route {route_a} differs from genus route {route_b}"
    elif not ahat_u_matches:
        failure = "log Â_u at u = 1 differs from the genus route"
    logger.info("one-loop partition of %s through k=%d: %s", g.name, max_k, "routes agree" if failure is None else failure)
    return PartitionReport(g.name, max_k, failure is None, route_a, route_b, chern, per_k, ahat_u_matches, stated_sign, failure)


@dataclass
class ClosednessReport:
    passed: bool
    k: int
    checked: int
    skipped: Optional[str] = None
    failure: Optional[str] = None


def chern_closedness_check(g: LInftyAlgebra, k: int) -> ClosednessReport:
    """
    str(At(α)^k) is annihilated by α ↦ α + s·ℓ2(e_j, α) to first order in s,
    for every degree-0 basis element e_j.
    """
    if any(n > 2 and table for n, table in g.brackets.items()):
        return ClosednessReport(True, k, 0, skipped="higher brackets present; the ℓ2 action alone is not an invariance")
    trace = atiyah_trace(g, k)
    if is_zero(trace):
        return ClosednessReport(True, k, 0)
    degrees = alpha_degrees(g)
    checked = 0
    for j in range(g.dim):
        if g.space.degree(j) != 0:
            continue
        images = {}
        for (i, m), c in g.adjoint_tensor(j).entries.items():
            images[i] = images.get(i, GradedPolynomial(degrees)) + GradedPolynomial(degrees, {(m,): c})
        variation = trace.apply_derivation(images, 0)
        checked += 1
        if not variation.is_zero():
            return ClosednessReport(False, k, checked, failure=f"str(At^{k}) moves under the action of {g.space.names[j]}: {variation}")
    return ClosednessReport(True, k, checked)


def trace_cyclicity_check(g: LInftyAlgebra, alpha_a, alpha_b, a: int, b: int) -> bool:
    """str(At(α)^a At(β)^b) = str(At(β)^b At(α)^a)"""
    left = atiyah_operator(g, alpha_a).power(a)
    right = atiyah_operator(g, alpha_b).power(b)
    return values_equal((left @ right).supertrace(g.space.degrees), (right @ left).supertrace(g.space.degrees))


@dataclass
class DegreeReport:
    passed: bool
    degrees: Dict[int, Optional[int]] = field(default_factory=dict)
    failure: Optional[str] = None


def obstruction_degree_check(g: LInftyAlgebra, n_max: int) -> DegreeReport:
    """
    The lowest degree among the monomials of ch_n, n = 2..n_max, measured with
    the α-coordinate degrees; every one must exceed the obstruction degrees {1, 2}.
    """
    lowest: Dict[int, Optional[int]] = {}
    failure = None
    for n in range(2, n_max + 1):
        ch = chern_character(g, n)
        if isinstance(ch, GradedPolynomial) and not ch.is_zero():
            lowest[n] = min(ch.monomial_degree(mono) for mono in ch.terms)
        else:
            lowest[n] = None
        if lowest[n] is not None and lowest[n] <= 2 and failure is None:
            failure = f"ch_{n} has a component in degree {lowest[n]}"
    return DegreeReport(failure is None, lowest, failure)


def serialize_alpha_polynomial(g: LInftyAlgebra, value) -> List[Dict]:
    """[{alpha: [basis names], coeff: FormalScalar records}] in sorted monomial order"""
    if is_zero(value):
        return []
    if not isinstance(value, GradedPolynomial):
        return [{"alpha": [], "coeff": FormalScalar.coerce(value).to_records()}]
    return [
        {"alpha": list(g.names_of(mono)), "coeff": FormalScalar.coerce(coeff).to_records()}
        for mono, coeff in sorted(value.terms.items())
    ]


if __name__ == "__main__":
    from linfty import load_algebra

    e1e2 = load_algebra({
        "basis": [{"name": "e1", "degree": 0}, {"name": "e2", "degree": 0}],
        "brackets": [{"arity": 2, "inputs": ["e1", "e2"], "output": [{"basis": "e1", "coeff": "1"}]}],
    }, name="e1e2")
    print("At(e2):", atiyah_operator(e1e2, "e2").to_rows())
    print("ch_1(e2):", chern_character(e1e2, 1, "e2"))
    report = one_loop_partition(e1e2, 1)
    print("partition:", report.route_a, "| equal:", report.equal)
