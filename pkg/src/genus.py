"""
Genus Series
Exact truncated power series for the Todd, Â and log-Todd genera and their zeta-value form
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import sympy
from sympy import QQ
from sympy.polys.ring_series import rs_exp, rs_log, rs_mul, rs_series_inversion
from sympy.polys.rings import ring

from graded import is_zero
from scalars import FormalScalar, bernoulli, scalar_normalize

logger = logging.getLogger(__name__)

MAX_ORDER = 30

SERIES_RING, X = ring("x", QQ)


def _rational(value) -> Fraction:
    if isinstance(value, FormalScalar):
        return value.to_rational()
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    return Fraction(int(value.numerator), int(value.denominator))


class GenusSeries:
    """Power series Σ c_k x^k truncated after x^order"""

    def __init__(self, coefficients: Sequence, order: Optional[int] = None):
        order = len(coefficients) - 1 if order is None else order
        coeffs = list(coefficients[: order + 1])
        coeffs += [Fraction(0)] * (order + 1 - len(coeffs))
        self.coefficients: List = coeffs
        self.order = order

    @classmethod
    def from_function(cls, term, order: int) -> "GenusSeries":
        return cls([term(k) for k in range(order + 1)], order)

    @classmethod
    def from_ring(cls, element, order: int) -> "GenusSeries":
        """Read back a sympy ring series, dropping everything above x^order"""
        coeffs = [Fraction(0)] * (order + 1)
        for (k,), c in element.terms():
            if k <= order:
                coeffs[k] = _rational(c)
        return cls(coeffs, order)

    def to_ring(self):
        """The series as an element of QQ[x]; coefficients must be rational"""
        element = SERIES_RING.zero
        for k, c in enumerate(self.coefficients):
            if not is_zero(c):
                value = _rational(c)
                element += QQ(value.numerator, value.denominator) * X**k
        return element

    def __getitem__(self, k: int):
        return self.coefficients[k] if 0 <= k <= self.order else Fraction(0)

    def __add__(self, other: "GenusSeries") -> "GenusSeries":
        order = min(self.order, other.order)
        return GenusSeries.from_ring(self.to_ring() + other.to_ring(), order)

    def __neg__(self) -> "GenusSeries":
        return GenusSeries([-c for c in self.coefficients], self.order)

    def __sub__(self, other: "GenusSeries") -> "GenusSeries":
        return self + (-other)

    def __mul__(self, other) -> "GenusSeries":
        if not isinstance(other, GenusSeries):
            return GenusSeries([c * other for c in self.coefficients], self.order)
        order = min(self.order, other.order)
        return GenusSeries.from_ring(rs_mul(self.to_ring(), other.to_ring(), X, order + 1), order)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GenusSeries):
            return NotImplemented
        order = min(self.order, other.order)
        return all(is_zero(self[k] - other[k]) for k in range(order + 1))

    def __repr__(self):
        terms = [f"{c}·x^{k}" for k, c in enumerate(self.coefficients) if not is_zero(c)]
        return " + ".join(terms) or "0"


def series_inverse(s: GenusSeries) -> GenusSeries:
    """1/s for s with invertible constant term"""
    if s[0] == 0:
        raise ValueError("series with zero constant term has no inverse")
    return GenusSeries.from_ring(rs_series_inversion(s.to_ring(), X, s.order + 1), s.order)


def series_log(s: GenusSeries) -> GenusSeries:
    """log s for s with constant term 1"""
    if s[0] != 1:
        raise ValueError(f"log needs constant term 1, got {s[0]}")
    if s.order == 0:
        return GenusSeries([Fraction(0)], 0)
    return GenusSeries.from_ring(rs_log(s.to_ring(), X, s.order + 1), s.order)


def series_exp(s: GenusSeries) -> GenusSeries:
    """exp s for s with zero constant term"""
    if s[0] != 0:
        raise ValueError(f"exp needs zero constant term, got {s[0]}")
    return GenusSeries.from_ring(rs_exp(s.to_ring(), X, s.order + 1), s.order)


def _check_order(order: int) -> None:
    if order < 0 or order > MAX_ORDER:
        raise ValueError(f"series order must lie in 0..{MAX_ORDER}, got {order}")


def todd_series(order: int) -> GenusSeries:
    """Q(x) = x/(1 - e^{-x}), by inverting (1 - e^{-x})/x = Σ (-1)^k x^k/(k+1)!"""
    _check_order(order)
    return series_inverse(GenusSeries.from_function(lambda k: Fraction((-1) ** k, math.factorial(k + 1)), order))


def ahat_series(order: int) -> GenusSeries:
    """P(x) = (x/2)/sinh(x/2), by inverting sinh(x/2)/(x/2)"""
    _check_order(order)

    def term(k: int) -> Fraction:
        if k % 2:
            return Fraction(0)
        return Fraction(1, 4 ** (k // 2) * math.factorial(k + 1))

    return series_inverse(GenusSeries.from_function(term, order))


def log_todd_minus_half(order: int) -> GenusSeries:
    """log Q(x) - x/2"""
    shift = GenusSeries([Fraction(0), Fraction(1, 2)], 1) if order >= 1 else GenusSeries([Fraction(0)], 0)
    return series_log(todd_series(order)) - GenusSeries(shift.coefficients, order)


def zeta_form_coefficient(k: int) -> FormalScalar:
    """2ζ(2k)/(2k·(2πi)^{2k}), the x^{2k} coefficient on the zeta side"""
    return FormalScalar({(-2 * k, (2 * k,)): Fraction(2, 2 * k)})


@dataclass
class SeriesIdentityReport:
    passed: bool
    order: int
    lhs: List[Fraction] = field(default_factory=list)
    rhs: List[Fraction] = field(default_factory=list)
    bernoulli_form: List[Fraction] = field(default_factory=list)
    failure: Optional[str] = None


def pwrsrs_identity_check(order: int) -> SeriesIdentityReport:
    """
    log(x/(1 - e^{-x})) - x/2 against Σ_k 2ζ(2k)x^{2k}/(2k(2πi)^{2k}), with the
    zeta side reduced through Bernoulli numbers, coefficient by coefficient.
    """
    _check_order(order)
    if order % 2:
        raise ValueError("the identity is checked through an even order")
    lhs = log_todd_minus_half(order).coefficients
    rhs, closed = [], []
    for n in range(order + 1):
        if n == 0 or n % 2:
            rhs.append(Fraction(0))
            closed.append(Fraction(0))
            continue
        rhs.append(scalar_normalize(zeta_form_coefficient(n // 2)).to_rational())
        closed.append(-bernoulli(n) / (n * math.factorial(n)))

    failure = None
    for n in range(order + 1):
        if not (lhs[n] == rhs[n] == closed[n]):
            failure = f"coefficient of x^{n}: series {lhs[n]}, zeta side {rhs[n]}, Bernoulli form {closed[n]}"
            break
    logger.info("power series identity through x^%d: %s", order, "exact" if failure is None else failure)
    return SeriesIdentityReport(failure is None, order, lhs, rhs, closed, failure)


def todd_ahat_relation_check(order: int) -> bool:
    """e^{-x/2}·Q(x) = P(x) exactly through x^order"""
    half = series_exp(GenusSeries.from_function(lambda k: Fraction(-1, 2) if k == 1 else Fraction(0), order))
    return half * todd_series(order) == ahat_series(order)


def genus_in_chern(genus: GenusSeries, order: Optional[int] = None) -> Dict[int, Fraction]:
    """
    log of a multiplicative genus ∏_r f(x_r) in the basis ch_m.

    f = Σ b_j x^j is read as ∏_i (1 + y_i x), so b_j are the elementary symmetric
    functions of the y_i. Newton's identities give their power sums P_m, and
    log f = Σ (-1)^{m-1} P_m x^m / m. Summed over Chern roots, x_r^m becomes
    the power sum m!·ch_m.
    """
    order = genus.order if order is None else min(order, genus.order)
    if genus[0] != 1:
        raise ValueError(f"a multiplicative genus has constant term 1, got {genus[0]}")
    elementary = [sympy.Rational(c.numerator, c.denominator) for c in map(_rational, genus.coefficients)]
    power_sums = [sympy.Integer(0)]
    out: Dict[int, Fraction] = {}
    for m in range(1, order + 1):
        p = sum(((-1) ** (i - 1) * elementary[i] * power_sums[m - i] for i in range(1, m)), sympy.Integer(0))
        p += (-1) ** (m - 1) * m * elementary[m]
        power_sums.append(p)
        coefficient = (-1) ** (m - 1) * p / m * sympy.factorial(m)
        if coefficient != 0:
            out[m] = _rational(coefficient)
    return out


def log_ahat_in_chern(max_k: int) -> Dict[int, Fraction]:
    """log Â in the ch basis: only ch_{2k} appear, through k = max_k"""
    _check_order(2 * max_k)
    return genus_in_chern(ahat_series(2 * max_k))


def ahat_u_coefficient(k: int) -> FormalScalar:
    """2(2k-1)!ζ(2k)/(2πi)^{2k}, the weight of u^{2k}·ch_{2k} in log Â_u"""
    return FormalScalar({(-2 * k, (2 * k,)): 2 * math.factorial(2 * k - 1)})


def ahat_u_series(chern_characters: Dict[int, object], max_k: int, u_order: Optional[int] = None) -> GenusSeries:
    """
    log Â_u = Σ_k 2(2k-1)!ζ(2k)/(2πi)^{2k} · u^{2k} · ch_{2k}, as a series in u
    whose coefficients are whatever the ch classes are (scalars or α-polynomials).
    """
    u_order = 2 * max_k if u_order is None else u_order
    coefficients: List = [Fraction(0)] * (u_order + 1)
    for k in range(1, max_k + 1):
        if 2 * k > u_order:
            break
        ch = chern_characters.get(2 * k)
        if ch is None or is_zero(ch):
            continue
        coefficients[2 * k] = scalar_normalize(ahat_u_coefficient(k)) * ch
    return GenusSeries(coefficients, u_order)


def evaluate_at_one(series: GenusSeries):
    """Σ of all coefficients, the u = 1 specialization"""
    total = Fraction(0)
    for c in series.coefficients:
        if not is_zero(c):
            total = total + c
    return total


if __name__ == "__main__":
    print("Todd:", todd_series(6))
    print("Â:", ahat_series(6))
    report = pwrsrs_identity_check(30)
    print("identity through x^30:", report.passed, "x^2 coefficient", report.lhs[2])
