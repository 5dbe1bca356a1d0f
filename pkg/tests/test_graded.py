import itertools
from fractions import Fraction

import pytest

from graded import (
    IN,
    OUT,
    GradedError,
    GradedSpace,
    SparseGradedTensor,
    contract,
    identity_tensor,
    koszul_sign,
    sort_with_sign,
)


def test_koszul_sign_swaps_only_odd_pairs():
    assert koszul_sign([1, 0], [1, 1]) == -1
    assert koszul_sign([1, 0], [1, 2]) == 1
    assert koszul_sign([0, 1], [1, 1]) == 1
    # cyclic rotation of three odd elements is even
    assert koszul_sign([1, 2, 0], [1, 1, 1]) == 1
    assert koszul_sign([2, 1, 0], [1, 1, 1]) == -1


def test_koszul_sign_rejects_non_permutation():
    with pytest.raises(GradedError):
        koszul_sign([0, 0], [1, 1])


def test_sort_with_sign():
    degrees = [1, 1, 0]
    assert sort_with_sign((1, 0), degrees) == ((0, 1), -1)
    assert sort_with_sign((2, 0), degrees) == ((0, 2), 1)
    assert sort_with_sign((1, 2, 0), degrees) == ((0, 1, 2), -1)


def test_space_basics():
    V = GradedSpace.from_pairs([("a", 0), ("b", 1)])
    assert V.dim == 2
    assert V.index("b") == 1
    assert V.parity(1) == 1
    assert V.shift(1).degrees == (-1, 0)
    with pytest.raises(GradedError):
        V.index("c")
    with pytest.raises(GradedError):
        GradedSpace(("a", "a"), (0, 0))


def test_tensor_rejects_inhomogeneous_entries():
    V = GradedSpace.from_pairs([("a", 0), ("b", 1)])
    with pytest.raises(GradedError):
        SparseGradedTensor(((V, OUT), (V, IN)), {(0, 0): 1, (1, 0): 1})


def test_identity_composes_to_identity():
    V = GradedSpace.from_pairs([("a", 0), ("b", 1), ("c", -1)])
    one = identity_tensor(V)
    assert contract(one, one, [(1, 0)]) == one


def test_contraction_applies_a_map():
    V = GradedSpace.from_pairs([("a", 0), ("b", 0)])
    swap = SparseGradedTensor(((V, OUT), (V, IN)), {(0, 1): Fraction(1), (1, 0): Fraction(2)})
    vector = SparseGradedTensor(((V, OUT),), {(1,): Fraction(3)})
    image = contract(swap, vector, [(1, 0)])
    assert image.entries == {(0,): Fraction(3)}


def test_contraction_needs_opposite_variance():
    V = GradedSpace.from_pairs([("a", 0)])
    one = identity_tensor(V)
    with pytest.raises(GradedError):
        contract(one, one, [(0, 0)])


def compose(p, q):
    """The rearrangement p applied after q"""
    return [q[i] for i in p]


@pytest.mark.parametrize("degrees", [(1, 1, 1), (1, 0, 1, 1), (0, 1, 2, 1), (1, 1, 0, 1)])
def test_koszul_sign_is_a_homomorphism(degrees):
    n = len(degrees)
    for q in itertools.permutations(range(n)):
        moved = [degrees[i] for i in q]
        for p in itertools.permutations(range(n)):
            assert koszul_sign(compose(p, q), degrees) == koszul_sign(q, degrees) * koszul_sign(p, moved)


def test_contraction_is_associative():
    V = GradedSpace.from_pairs([("a", 0), ("b", 1), ("c", 1), ("d", 2)])
    A = SparseGradedTensor(((V, OUT), (V, IN)), {(1, 0): Fraction(2), (3, 2): Fraction(-1), (2, 0): Fraction(1, 3)})
    B = SparseGradedTensor(((V, OUT), (V, IN), (V, IN)), {(0, 1, 2): Fraction(1), (0, 0, 3): Fraction(3), (1, 1, 3): Fraction(-2), (2, 2, 3): Fraction(1, 2)})
    C = SparseGradedTensor(((V, OUT),), {(1,): Fraction(5), (2,): Fraction(-1)})
    left = contract(contract(A, B, [(1, 0)]), C, [(2, 0)])
    right = contract(A, contract(B, C, [(2, 0)]), [(1, 0)])
    assert not left.is_zero()
    assert left == right
