"""
Graded Linear Algebra
Koszul signs, finite graded spaces and sparse graded tensors with contraction
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

logger = logging.getLogger(__name__)

IN = "in"
OUT = "out"


class GradedError(ValueError):
    """Malformed permutation, unknown basis element or mismatched legs"""


def is_zero(value) -> bool:
    """True for an exact or formal zero coefficient"""
    if hasattr(value, "is_zero"):
        return value.is_zero()
    return value == 0


def koszul_sign(permutation: Sequence[int], degrees: Sequence[int]) -> int:
    """
    Sign picked up when the sequence x_0..x_{n-1} is rearranged into
    x_{p[0]}, x_{p[1]}, ... with x_i of degree degrees[i].

    Counted transposition by transposition: every inverted pair of odd
    elements contributes -1.
    """
    n = len(degrees)
    if len(permutation) != n or sorted(permutation) != list(range(n)):
        raise GradedError(f"not a permutation of 0..{n - 1}: {list(permutation)}")

    sign = 1
    for i in range(n):
        for j in range(i + 1, n):
            if permutation[i] > permutation[j] and degrees[permutation[i]] % 2 and degrees[permutation[j]] % 2:
                sign = -sign
    return sign


def sort_with_sign(items: Sequence[int], degrees: Sequence[int]) -> Tuple[Tuple[int, ...], int]:
    """
    Stable sort of a word of basis indices; returns the sorted word and the
    Koszul sign of the reordering. degrees is indexed by basis index.
    """
    order = sorted(range(len(items)), key=lambda k: (items[k], k))
    sign = koszul_sign(order, [degrees[i] for i in items])
    return tuple(items[k] for k in order), sign


@dataclass(frozen=True)
class GradedSpace:
    """A finite ordered basis of named elements with integer degrees"""

    names: Tuple[str, ...]
    degrees: Tuple[int, ...]

    def __post_init__(self):
        if len(self.names) == 0:
            raise GradedError("a graded space needs at least one basis element")
        if len(self.names) != len(self.degrees):
            raise GradedError("names and degrees differ in length")
        if len(set(self.names)) != len(self.names):
            raise GradedError(f"duplicate basis names in {self.names}")

    @classmethod
    def from_pairs(cls, basis: Sequence[Tuple[str, int]]) -> "GradedSpace":
        return cls(tuple(name for name, _ in basis), tuple(int(deg) for _, deg in basis))

    @property
    def dim(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise GradedError(f"unknown basis element '{name}'") from None

    def degree(self, i: int) -> int:
        return self.degrees[i]

    def shift(self, s: int) -> "GradedSpace":
        """V[s], whose degree-n part is V^{n+s}"""
        return GradedSpace(self.names, tuple(d - s for d in self.degrees))

    def parity(self, i: int) -> int:
        return self.degrees[i] % 2


@dataclass
class SparseGradedTensor:
    """
    Sparse tensor with one GradedSpace per leg. An output leg carrying basis
    index i contributes degree |e_i|, an input leg contributes -|e_i|.
    """

    legs: Tuple[Tuple[GradedSpace, str], ...]
    entries: Dict[Tuple[int, ...], object] = field(default_factory=dict)
    degree: int = None

    def __post_init__(self):
        self.legs = tuple(self.legs)
        for _, variance in self.legs:
            if variance not in (IN, OUT):
                raise GradedError(f"unknown variance '{variance}'")
        self.entries = {tuple(k): v for k, v in self.entries.items() if not is_zero(v)}
        for key in self.entries:
            if len(key) != len(self.legs):
                raise GradedError(f"index {key} does not match {len(self.legs)} legs")
            entry_degree = self.index_degree(key)
            if self.degree is None:
                self.degree = entry_degree
            elif entry_degree != self.degree:
                raise GradedError(f"entry {key} has degree {entry_degree}, tensor degree is {self.degree}")

    def leg_degree(self, leg: int, i: int) -> int:
        space, variance = self.legs[leg]
        return space.degree(i) if variance == OUT else -space.degree(i)

    def index_degree(self, key: Sequence[int]) -> int:
        return sum(self.leg_degree(leg, i) for leg, i in enumerate(key))

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseGradedTensor):
            return NotImplemented
        return self.legs == other.legs and self.entries == other.entries


def identity_tensor(space: GradedSpace) -> SparseGradedTensor:
    """The identity endomorphism, legs (out, in)"""
    return SparseGradedTensor(((space, OUT), (space, IN)), {(i, i): Fraction(1) for i in range(space.dim)}, 0)


def contract(a: SparseGradedTensor, b: SparseGradedTensor, leg_pairs: List[Tuple[int, int]]) -> SparseGradedTensor:
    """
    Contract legs of a against legs of b.

    The result keeps the free legs of a followed by the free legs of b. Each
    product of entries is signed by moving the paired legs, pair by pair, to
    the end of the word (a legs, b legs) before they are evaluated.
    """
    paired_a = [la for la, _ in leg_pairs]
    paired_b = [lb for _, lb in leg_pairs]
    if len(set(paired_a)) != len(paired_a) or len(set(paired_b)) != len(paired_b):
        raise GradedError("a leg may be contracted only once")
    for la, lb in leg_pairs:
        space_a, var_a = a.legs[la]
        space_b, var_b = b.legs[lb]
        if space_a != space_b:
            raise GradedError(f"leg {la} and leg {lb} live on different spaces")
        if var_a == var_b:
            raise GradedError(f"leg {la} and leg {lb} have the same variance '{var_a}'")

    free_a = [leg for leg in range(len(a.legs)) if leg not in paired_a]
    free_b = [leg for leg in range(len(b.legs)) if leg not in paired_b]
    n_a = len(a.legs)
    order = free_a + [n_a + lb for lb in free_b]
    for la, lb in leg_pairs:
        order += [la, n_a + lb]

    legs = tuple(a.legs[leg] for leg in free_a) + tuple(b.legs[leg] for leg in free_b)
    result: Dict[Tuple[int, ...], object] = {}

    # index b by its paired-leg values
    by_pairing: Dict[Tuple[int, ...], List[Tuple[Tuple[int, ...], object]]] = {}
    for key_b, value_b in b.entries.items():
        by_pairing.setdefault(tuple(key_b[lb] for lb in paired_b), []).append((key_b, value_b))

    for key_a, value_a in a.entries.items():
        for key_b, value_b in by_pairing.get(tuple(key_a[la] for la in paired_a), []):
            word_degrees = [a.leg_degree(leg, i) for leg, i in enumerate(key_a)]
            word_degrees += [b.leg_degree(leg, i) for leg, i in enumerate(key_b)]
            sign = koszul_sign(order, word_degrees)
            key = tuple(key_a[leg] for leg in free_a) + tuple(key_b[leg] for leg in free_b)
            term = value_a * value_b if sign > 0 else -(value_a * value_b)
            result[key] = result[key] + term if key in result else term

    degree = None
    if a.degree is not None and b.degree is not None:
        degree = a.degree + b.degree
    out = SparseGradedTensor(legs, {}, degree)
    out.entries = {k: v for k, v in result.items() if not is_zero(v)}
    logger.debug("contracted %d x %d entries into %d", len(a.entries), len(b.entries), len(out.entries))
    return out
