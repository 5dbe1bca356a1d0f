"""
Graded Polynomials
Truncated graded-commutative polynomial algebras such as Sym(g∨[-1])
"""

import logging
from fractions import Fraction
from typing import Dict, Iterable, Optional, Sequence, Tuple

from graded import is_zero, sort_with_sign
from scalars import FormalScalar

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]


def merge_monomials(a: Monomial, b: Monomial, degrees: Sequence[int]) -> Tuple[Optional[Monomial], int]:
    """Product of two sorted monomials; None when an odd variable repeats"""
    word, sign = sort_with_sign(a + b, degrees)
    for left, right in zip(word, word[1:]):
        if left == right and degrees[left] % 2:
            return None, 0
    return word, sign


class GradedPolynomial:
    """
    Sparse element of a graded-commutative polynomial algebra on variables
    x_0..x_{n-1} of the given degrees. Monomials are sorted tuples of variable
    indices; odd variables never repeat. Terms of size above `order` are
    dropped and counted in `overflow`.
    """

    __slots__ = ("degrees", "terms", "order", "overflow")

    def __init__(self, degrees: Sequence[int], terms: Dict[Monomial, object] = None, order: Optional[int] = None):
        self.degrees = tuple(degrees)
        self.order = order
        self.overflow = 0
        self.terms: Dict[Monomial, object] = {}
        for mono, coeff in (terms or {}).items():
            self._accumulate(tuple(mono), coeff)

    def _accumulate(self, mono: Monomial, coeff) -> None:
        if is_zero(coeff):
            return
        if self.order is not None and len(mono) > self.order:
            self.overflow += 1
            return
        if mono in self.terms:
            total = self.terms[mono] + coeff
            if is_zero(total):
                del self.terms[mono]
            else:
                self.terms[mono] = total
        else:
            self.terms[mono] = coeff

    def _empty(self) -> "GradedPolynomial":
        return GradedPolynomial(self.degrees, order=self.order)

    @classmethod
    def constant(cls, degrees: Sequence[int], value=Fraction(1), order: Optional[int] = None) -> "GradedPolynomial":
        return cls(degrees, {(): value}, order)

    @classmethod
    def variable(cls, degrees: Sequence[int], i: int, order: Optional[int] = None) -> "GradedPolynomial":
        return cls(degrees, {(i,): Fraction(1)}, order)

    def monomial_degree(self, mono: Monomial) -> int:
        return sum(self.degrees[i] for i in mono)

    def homogeneous_degree(self) -> Optional[int]:
        """The common degree of all terms, None if mixed or zero"""
        found = {self.monomial_degree(mono) for mono in self.terms}
        return found.pop() if len(found) == 1 else None

    def is_zero(self) -> bool:
        return not self.terms

    def copy(self) -> "GradedPolynomial":
        out = self._empty()
        out.terms = dict(self.terms)
        return out

    def _lift(self, value) -> "GradedPolynomial":
        if isinstance(value, GradedPolynomial):
            return value
        return GradedPolynomial(self.degrees, {(): value}, self.order)

    def __add__(self, other) -> "GradedPolynomial":
        other = self._lift(other)
        out = self.copy()
        for mono, coeff in other.terms.items():
            out._accumulate(mono, coeff)
        return out

    def __neg__(self) -> "GradedPolynomial":
        out = self._empty()
        out.terms = {mono: -coeff for mono, coeff in self.terms.items()}
        return out

    __radd__ = __add__

    def __sub__(self, other) -> "GradedPolynomial":
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "GradedPolynomial":
        return (-self) + other

    def scale(self, factor) -> "GradedPolynomial":
        out = self._empty()
        for mono, coeff in self.terms.items():
            out._accumulate(mono, coeff * factor)
        return out

    def __mul__(self, other) -> "GradedPolynomial":
        if not isinstance(other, GradedPolynomial):
            return self.scale(other)
        out = self._empty()
        for mono_a, coeff_a in self.terms.items():
            for mono_b, coeff_b in other.terms.items():
                if self.order is not None and len(mono_a) + len(mono_b) > self.order:
                    out.overflow += 1
                    continue
                word, sign = merge_monomials(mono_a, mono_b, self.degrees)
                if word is None:
                    continue
                product = coeff_a * coeff_b
                out._accumulate(word, product if sign > 0 else -product)
        return out

    def __rmul__(self, other) -> "GradedPolynomial":
        out = self._empty()
        for mono, coeff in self.terms.items():
            out._accumulate(mono, other * coeff)
        return out

    def __truediv__(self, other) -> "GradedPolynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / Fraction(other))
        return self.scale(FormalScalar.rational(1) / other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedPolynomial):
            return NotImplemented
        return (self - other).is_zero()

    def left_derivative(self, k: int) -> "GradedPolynomial":
        """∂/∂x_k acting from the left"""
        out = self._empty()
        for mono, coeff in self.terms.items():
            for r, i in enumerate(mono):
                if i != k:
                    continue
                sign = -1 if self.degrees[k] % 2 and sum(self.degrees[j] for j in mono[:r]) % 2 else 1
                out._accumulate(mono[:r] + mono[r + 1:], coeff if sign > 0 else -coeff)
        return out

    def apply_derivation(self, images: Dict[int, "GradedPolynomial"], degree: int) -> "GradedPolynomial":
        """
        Extend x_i -> images[i] to a derivation of the given degree:
        δ(ab) = δ(a)b + (-1)^{degree·|a|} a δ(b).
        """
        out = self._empty()
        for mono, coeff in self.terms.items():
            for r, i in enumerate(mono):
                image = images.get(i)
                if image is None or image.is_zero():
                    continue
                prefix_degree = sum(self.degrees[j] for j in mono[:r])
                sign = -1 if degree % 2 and prefix_degree % 2 else 1
                prefix = GradedPolynomial(self.degrees, {mono[:r]: coeff if sign > 0 else -coeff})
                suffix = GradedPolynomial(self.degrees, {mono[r + 1:]: Fraction(1)})
                term = prefix * image * suffix
                for word, value in term.terms.items():
                    out._accumulate(word, value)
                out.overflow += term.overflow
        return out

    def truncate(self, order: int) -> "GradedPolynomial":
        return GradedPolynomial(self.degrees, self.terms, order)

    def terms_of_size(self, size: int) -> Iterable[Tuple[Monomial, object]]:
        return ((mono, coeff) for mono, coeff in self.terms.items() if len(mono) == size)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{coeff}*x{list(mono)}" for mono, coeff in sorted(self.terms.items()))


def multiset_factorial(mono: Monomial) -> int:
    """∏ multiplicity! over the distinct entries of a sorted monomial"""
    result, run = 1, 1
    for prev, cur in zip(mono, mono[1:]):
        run = run + 1 if cur == prev else 1
        result *= run
    return result
