"""
Mixed Complexes
Homotopy fixed points (V[[u]], d + uε) of a finite mixed complex, with exact ranks
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

import sympy

from scalars import parse_rational

logger = logging.getLogger(__name__)

Matrix = List[List[Fraction]]


class MixedComplexError(ValueError):
    """The data is not a mixed complex; the message names the failing relation"""


def _to_sympy(matrix: Matrix, rows: int, cols: int) -> sympy.Matrix:
    if rows == 0 or cols == 0:
        return sympy.zeros(rows, cols)
    out = sympy.zeros(rows, cols)
    for i, row in enumerate(matrix):
        for j, value in enumerate(row):
            value = parse_rational(value)
            if value:
                out[i, j] = sympy.Rational(value.numerator, value.denominator)
    return out


@dataclass
class MixedComplex:
    """
    dims[k] = dim V^k. d[k]: V^k → V^{k+1} and eps[k]: V^k → V^{k-1}, as
    matrices with rows indexing the target basis.
    """

    dims: Dict[int, int]
    d: Dict[int, Matrix] = field(default_factory=dict)
    eps: Dict[int, Matrix] = field(default_factory=dict)

    def __post_init__(self):
        self.dims = {int(k): int(v) for k, v in self.dims.items() if int(v) > 0}
        self.d = {int(k): v for k, v in self.d.items()}
        self.eps = {int(k): v for k, v in self.eps.items()}
        self.verify()

    def dim(self, k: int) -> int:
        return self.dims.get(k, 0)

    def d_matrix(self, k: int) -> sympy.Matrix:
        return _to_sympy(self.d.get(k, []), self.dim(k + 1), self.dim(k))

    def eps_matrix(self, k: int) -> sympy.Matrix:
        return _to_sympy(self.eps.get(k, []), self.dim(k - 1), self.dim(k))

    def verify(self) -> None:
        for k in self.dims:
            if any(self.d_matrix(k + 1) * self.d_matrix(k)):
                raise MixedComplexError(f"relation d^2 = 0 fails on V^{k}")
            if any(self.eps_matrix(k - 1) * self.eps_matrix(k)):
                raise MixedComplexError(f"relation eps^2 = 0 fails on V^{k}")
            if any(self.eps_matrix(k + 1) * self.d_matrix(k) + self.d_matrix(k - 1) * self.eps_matrix(k)):
                raise MixedComplexError(f"relation d*eps+eps*d = 0 fails on V^{k}")

    @classmethod
    def from_dict(cls, document: Dict) -> "MixedComplex":
        return cls(document["dims"], document.get("d", {}), document.get("eps", {}))


@dataclass
class FixedPointComplex:
    """(V[[u]]/u^{N+1}, d + uε), u of degree 2"""

    source: MixedComplex
    u_order: int
    basis: Dict[int, List[Tuple[int, int, int]]] = field(default_factory=dict)
    ranks: Dict[int, int] = field(default_factory=dict)


def _total_basis(V: MixedComplex, u_order: int) -> Dict[int, List[Tuple[int, int, int]]]:
    """Basis vectors (j, k, i) = u^j · v_i, v_i ∈ V^k, grouped by total degree 2j + k"""
    basis: Dict[int, List[Tuple[int, int, int]]] = {}
    for j in range(u_order + 1):
        for k in sorted(V.dims):
            for i in range(V.dim(k)):
                basis.setdefault(2 * j + k, []).append((j, k, i))
    return basis


def _total_differential(V: MixedComplex, basis, n: int, u_order: int) -> sympy.Matrix:
    source = basis.get(n, [])
    target = basis.get(n + 1, [])
    index = {vector: r for r, vector in enumerate(target)}
    out = sympy.zeros(len(target), len(source))
    for c, (j, k, i) in enumerate(source):
        dk = V.d_matrix(k)
        for r in range(dk.rows):
            if dk[r, i] != 0:
                out[index[(j, k + 1, r)], c] += dk[r, i]
        if j + 1 <= u_order:
            ek = V.eps_matrix(k)
            for r in range(ek.rows):
                if ek[r, i] != 0:
                    out[index[(j + 1, k - 1, r)], c] += ek[r, i]
    return out


def _rank(matrix: sympy.Matrix) -> int:
    if matrix.rows == 0 or matrix.cols == 0:
        return 0
    return matrix.rank()


def homotopy_fixed_points(V: MixedComplex, u_order: int) -> FixedPointComplex:
    """Cohomology ranks of the u-truncated homotopy fixed point complex, per total degree"""
    if u_order < 0:
        raise MixedComplexError(f"u_order must be ≥ 0, got {u_order}")
    basis = _total_basis(V, u_order)
    ranks = {}
    for n in sorted(basis):
        outgoing = _rank(_total_differential(V, basis, n, u_order))
        incoming = _rank(_total_differential(V, basis, n - 1, u_order))
        rank = len(basis[n]) - outgoing - incoming
        if rank:
            ranks[n] = rank
    logger.info("homotopy fixed points through u^%d: ranks %s", u_order, ranks)
    return FixedPointComplex(V, u_order, basis, ranks)
