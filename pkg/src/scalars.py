"""
Formal Scalars
Exact rationals times powers of 2πi and formal zeta values, with Bernoulli reduction
"""

import cmath
import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Tuple, Union

import sympy
from scipy.special import zeta as zeta_function

logger = logging.getLogger(__name__)

Key = Tuple[int, Tuple[int, ...]]
Rational = Union[int, Fraction]

TWO_PI_I = complex(0.0, 2.0 * math.pi)


def parse_rational(text) -> Fraction:
    """Read "p/q", "p" or an int as an exact Fraction"""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    text = str(text).strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"not a rational number: '{text}'") from None


def format_rational(q: Rational) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


@lru_cache(maxsize=None)
def bernoulli(n: int) -> Fraction:
    """B_n as an exact Fraction (even-index values are convention free)"""
    if n < 0:
        raise ValueError("n must be >= 0")
    value = sympy.bernoulli(n)
    return Fraction(int(value.p), int(value.q))


@lru_cache(maxsize=None)
def even_zeta_factor(k: int) -> Fraction:
    """The rational r with ζ(2k) = r·(2πi)^{2k}, namely -B_{2k}/(2·(2k)!)"""
    return -bernoulli(2 * k) / (2 * math.factorial(2 * k))


class FormalScalar:
    """Finite sum of rational · (2πi)^m · ζ(n_1)···ζ(n_r)"""

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Key, Rational] = None):
        self.terms: Dict[Key, Fraction] = {}
        for (power, zetas), coeff in (terms or {}).items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            for n in zetas:
                if n < 2:
                    raise ValueError(f"ζ({n}) is not a convergent zeta value")
            key = (int(power), tuple(sorted(zetas)))
            total = self.terms.get(key, Fraction(0)) + coeff
            if total == 0:
                self.terms.pop(key, None)
            else:
                self.terms[key] = total

    # constructors

    @classmethod
    def rational(cls, q: Rational) -> "FormalScalar":
        return cls({(0, ()): q})

    @classmethod
    def twopii(cls, power: int = 1) -> "FormalScalar":
        return cls({(power, ()): 1})

    @classmethod
    def zeta(cls, n: int) -> "FormalScalar":
        return cls({(0, (n,)): 1})

    @classmethod
    def coerce(cls, value) -> "FormalScalar":
        if isinstance(value, FormalScalar):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.rational(value)
        raise TypeError(f"cannot use {type(value).__name__} as a formal scalar")

    # normal form

    def normalize(self) -> "FormalScalar":
        """Eliminate every even zeta value; odd ones stay symbolic"""
        reduced: Dict[Key, Fraction] = {}
        for (power, zetas), coeff in self.terms.items():
            odd = []
            for n in zetas:
                if n % 2 == 0:
                    coeff *= even_zeta_factor(n // 2)
                    power += n
                else:
                    odd.append(n)
            key = (power, tuple(odd))
            reduced[key] = reduced.get(key, Fraction(0)) + coeff
        return FormalScalar(reduced)

    @property
    def has_symbolic_zeta(self) -> bool:
        """True when an odd zeta value survives reduction"""
        return any(n % 2 for _, zetas in self.terms for n in zetas)

    def is_zero(self) -> bool:
        return not self.normalize().terms

    def is_rational(self) -> bool:
        reduced = self.normalize().terms
        return all(key == (0, ()) for key in reduced)

    def to_rational(self) -> Fraction:
        reduced = self.normalize().terms
        if not all(key == (0, ()) for key in reduced):
            raise ValueError(f"{self} is not rational")
        return reduced.get((0, ()), Fraction(0))

    # ring operations

    def __add__(self, other):
        try:
            other = FormalScalar.coerce(other)
        except TypeError:
            return NotImplemented
        merged = dict(self.terms)
        for key, coeff in other.terms.items():
            merged[key] = merged.get(key, Fraction(0)) + coeff
        return FormalScalar(merged)

    __radd__ = __add__

    def __neg__(self):
        return FormalScalar({key: -coeff for key, coeff in self.terms.items()})

    def __sub__(self, other):
        try:
            return self + (-FormalScalar.coerce(other))
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return FormalScalar({key: coeff * other for key, coeff in self.terms.items()})
        if not isinstance(other, FormalScalar):
            return NotImplemented
        product: Dict[Key, Fraction] = {}
        for (p1, z1), c1 in self.terms.items():
            for (p2, z2), c2 in other.terms.items():
                key = (p1 + p2, tuple(sorted(z1 + z2)))
                product[key] = product.get(key, Fraction(0)) + c1 * c2
        return FormalScalar(product).normalize()

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return FormalScalar({key: coeff / Fraction(other) for key, coeff in self.terms.items()})
        if isinstance(other, FormalScalar) and len(other.normalize().terms) == 1:
            ((power, zetas), coeff), = other.normalize().terms.items()
            if not zetas:
                return self * FormalScalar({(-power, ()): 1 / coeff})
        return NotImplemented

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative powers are only defined for monomials; divide instead")
        result = FormalScalar.rational(1)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        try:
            other = FormalScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self.normalize().terms == other.normalize().terms

    def __hash__(self):
        return hash(frozenset(self.normalize().terms.items()))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for (power, zetas), coeff in sorted(self.terms.items()):
            factors = [str(coeff)]
            if power:
                factors.append(f"(2πi)^{power}")
            factors += [f"ζ({n})" for n in zetas]
            parts.append("·".join(factors))
        return " + ".join(parts)

    # serialization

    def to_records(self) -> List[Dict]:
        return [
            {"coeff": format_rational(coeff), "twopii": power, "zeta": list(zetas)}
            for (power, zetas), coeff in sorted(self.normalize().terms.items())
        ]

    @classmethod
    def from_records(cls, records: List[Dict]) -> "FormalScalar":
        return cls({(int(r["twopii"]), tuple(r.get("zeta", []))): parse_rational(r["coeff"]) for r in records})


def scalar_normalize(s) -> FormalScalar:
    """Bernoulli-reduced normal form; idempotent"""
    return FormalScalar.coerce(s).normalize()


def evaluate_numeric(s) -> complex:
    """Substitute 2πi and ζ(n) numerically"""
    if isinstance(s, (int, Fraction)):
        return complex(float(s))
    total = 0j
    for (power, zetas), coeff in sorted(s.terms.items()):
        value = complex(float(coeff)) * TWO_PI_I ** power
        for n in zetas:
            value *= float(zeta_function(n))
        total += value
    return total


def as_complex(value) -> complex:
    """Numeric value of a Fraction, FormalScalar or float"""
    if isinstance(value, FormalScalar):
        return evaluate_numeric(value)
    return complex(value)


if __name__ == "__main__":
    print(scalar_normalize(FormalScalar.zeta(2) * FormalScalar.twopii(-2)))
    print(evaluate_numeric(FormalScalar.zeta(2)), math.pi ** 2 / 6)
    print(cmath.isclose(evaluate_numeric(FormalScalar.twopii()), TWO_PI_I))
