"""
Curved L-infinity Algebras
Loading, Chevalley-Eilenberg calculus, the doubled algebra and reduced CE cohomology
"""

import itertools
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy

from graded import IN, OUT, GradedError, GradedSpace, SparseGradedTensor, is_zero, koszul_sign, sort_with_sign
from polynomial import GradedPolynomial, Monomial, multiset_factorial
from scalars import format_rational, parse_rational

logger = logging.getLogger(__name__)

Vector = Dict[int, object]


class AlgebraError(ValueError):
    """Invalid algebra description or an operation applied outside its hypotheses"""


@dataclass
class LInftyAlgebra:
    """
    A finite-dimensional curved L∞ algebra. brackets[n] maps a sorted tuple of
    basis indices to the output vector of ℓ_n; ℓ_n is graded-symmetric in the
    degrees of g[1] and has degree 2 - n on g.
    """

    space: GradedSpace
    brackets: Dict[int, Dict[Tuple[int, ...], Vector]] = field(default_factory=dict)
    pairing: Optional[Dict[Tuple[int, int], Fraction]] = None
    max_arity: int = 2
    name: str = ""
    nilpotent_curvature: bool = False

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def shifted_degrees(self) -> Tuple[int, ...]:
        """Degrees in g[1]"""
        return tuple(d - 1 for d in self.space.degrees)

    @property
    def ce_degrees(self) -> Tuple[int, ...]:
        """Degrees of the dual generators of Sym(g∨[-1])"""
        return tuple(1 - d for d in self.space.degrees)

    @property
    def is_curved(self) -> bool:
        return any(not is_zero(c) for c in self.brackets.get(0, {}).get((), {}).values())

    def require_uncurved(self, operation: str) -> None:
        if self.is_curved and not self.nilpotent_curvature:
            raise AlgebraError(f"{operation} needs ℓ0 = 0 or a nilpotent curvature marker ({self.name or 'algebra'})")

    def bracket(self, inputs: Sequence[int]) -> Vector:
        """ℓ_n on basis elements in any order"""
        inputs = tuple(inputs)
        word, sign = sort_with_sign(inputs, self.shifted_degrees)
        stored = self.brackets.get(len(inputs), {}).get(word)
        if not stored:
            return {}
        if sign > 0:
            return dict(stored)
        return {i: -c for i, c in stored.items()}

    def bracket_of_vectors(self, vectors: Sequence[Vector]) -> Vector:
        """ℓ_n extended multilinearly; coefficients are treated as even scalars"""
        result: Vector = {}
        if not vectors:
            return self.bracket(())
        for choice in itertools.product(*[sorted(v.items()) for v in vectors]):
            coeff = 1
            for _, c in choice:
                coeff = coeff * c
            for i, c in self.bracket([j for j, _ in choice]).items():
                result[i] = result.get(i, 0) + coeff * c
        return {i: c for i, c in result.items() if not is_zero(c)}

    def bracket_tensor(self, n: int) -> SparseGradedTensor:
        """ℓ_n as a tensor with legs (out, in, ..., in) over every input order"""
        legs = ((self.space, OUT),) + ((self.space, IN),) * n
        entries = {}
        for inputs in itertools.product(range(self.dim), repeat=n):
            for i, c in self.bracket(inputs).items():
                entries[(i,) + inputs] = c
        return SparseGradedTensor(legs, entries, 2 - n)

    def adjoint_tensor(self, j: int) -> SparseGradedTensor:
        """m ↦ ℓ2(e_j, m), legs (out, in)"""
        entries = {}
        for m in range(self.dim):
            for i, c in self.bracket((j, m)).items():
                entries[(i, m)] = c
        return SparseGradedTensor(((self.space, OUT), (self.space, IN)), entries, self.space.degree(j))

    def names_of(self, mono: Iterable[int]) -> Tuple[str, ...]:
        return tuple(self.space.names[i] for i in mono)


# loading

def _resolve(space: GradedSpace, name: str) -> int:
    try:
        return space.index(name)
    except ValueError as e:
        raise AlgebraError(str(e)) from None


def load_algebra(document: Dict, name: str = "") -> LInftyAlgebra:
    """Build an LInftyAlgebra from its JSON description"""
    try:
        basis = [(b["name"], int(b["degree"])) for b in document["basis"]]
    except (KeyError, TypeError) as e:
        raise AlgebraError(f"malformed basis: {e}") from None
    try:
        space = GradedSpace.from_pairs(basis)
    except ValueError as e:
        raise AlgebraError(str(e)) from None
    shifted = tuple(d - 1 for d in space.degrees)

    brackets: Dict[int, Dict[Tuple[int, ...], Vector]] = {}
    for entry in document.get("brackets", []):
        inputs = [_resolve(space, n) for n in entry.get("inputs", [])]
        arity = int(entry.get("arity", len(inputs)))
        if arity != len(inputs):
            raise AlgebraError(f"bracket declares arity {arity} but has {len(inputs)} inputs")
        word = tuple(sorted(inputs))
        if word != tuple(inputs):
            raise AlgebraError(
                f"ℓ{arity}{tuple(entry['inputs'])} lists its inputs out of basis order; "
                f"write them as {tuple(space.names[i] for i in word)}"
            )
        for a, b in zip(word, word[1:]):
            if a == b and shifted[a] % 2:
                raise AlgebraError(f"ℓ{arity} repeats {space.names[a]}, which is odd in g[1]")

        output: Vector = {}
        for term in entry.get("output", []):
            i = _resolve(space, term["basis"])
            expected = 2 - arity + sum(space.degree(j) for j in inputs)
            if space.degree(i) != expected:
                raise AlgebraError(
                    f"degree-inconsistent bracket ℓ{arity}{tuple(entry.get('inputs', []))}: "
                    f"output {term['basis']} has degree {space.degree(i)}, expected {expected}"
                )
            coeff = parse_rational(term["coeff"])
            output[i] = output.get(i, Fraction(0)) + coeff
        output = {i: c for i, c in output.items() if c != 0}

        table = brackets.setdefault(arity, {})
        if word in table:
            kind = "contradictory" if table[word] != output else "duplicate"
            raise AlgebraError(f"{kind} entries for ℓ{arity}{tuple(space.names[i] for i in word)}")
        table[word] = output

    pairing = None
    if document.get("pairing"):
        pairing = {}
        for entry in document["pairing"]:
            a, b = (_resolve(space, n) for n in entry["inputs"])
            pairing[(a, b)] = parse_rational(entry["coeff"])

    declared = [n for n, table in brackets.items() if any(table.values())]
    max_arity = int(document.get("max_arity", max(declared, default=2)))
    algebra = LInftyAlgebra(
        space=space,
        brackets={n: {k: v for k, v in table.items() if v} for n, table in brackets.items()},
        pairing=pairing,
        max_arity=max(max_arity, max(declared, default=0)),
        name=document.get("name", name),
        nilpotent_curvature=bool(document.get("nilpotent_curvature", False)),
    )
    logger.info("loaded %s: dim %d, arities %s", algebra.name or "algebra", algebra.dim, sorted(declared))
    return algebra


def load_algebra_file(path: str) -> LInftyAlgebra:
    with open(path, "r", encoding="utf-8") as f:
        try:
            document = json.load(f)
        except json.JSONDecodeError as e:
            raise AlgebraError(f"{path} is not valid JSON: {e}") from None
    return load_algebra(document, name=document.get("name", path))


def dump_algebra(g: LInftyAlgebra) -> Dict:
    """Inverse of load_algebra on canonical entries"""
    names = g.space.names
    return {
        "name": g.name,
        "basis": [{"name": n, "degree": d} for n, d in zip(names, g.space.degrees)],
        "brackets": [
            {
                "arity": n,
                "inputs": [names[i] for i in word],
                "output": [{"basis": names[i], "coeff": format_rational(c)} for i, c in sorted(out.items())],
            }
            for n in sorted(g.brackets)
            for word, out in sorted(g.brackets[n].items())
        ],
        "max_arity": g.max_arity,
    }


# Chevalley-Eilenberg calculus

def interleave_sign(mono: Monomial, shifted_degrees: Sequence[int]) -> int:
    """(-1)^{P(P+1)/2}, P the number of inputs that are odd in g[1]"""
    p = sum(1 for j in mono if shifted_degrees[j] % 2)
    return -1 if (p * (p + 1) // 2) % 2 else 1


def vector_field(g: LInftyAlgebra, order: Optional[int] = None) -> List[GradedPolynomial]:
    """
    The homological vector field Q with d x^i = Q^i on Sym(g∨[-1]).
    Q^i[J] = s_J · ℓ_n(e_J)^i / ∏ mult! for sorted J.
    """
    degrees = g.ce_degrees
    components = [GradedPolynomial(degrees, order=order) for _ in range(g.dim)]
    for n, table in g.brackets.items():
        for word, output in table.items():
            factor = Fraction(interleave_sign(word, g.shifted_degrees), multiset_factorial(word))
            for i, c in output.items():
                components[i]._accumulate(word, c * factor)
    return components


def from_vector_field(space: GradedSpace, components: Sequence[GradedPolynomial], name: str = "") -> LInftyAlgebra:
    """Read brackets back off a vector field: ℓ_n(e_J)^i = s_J · ∏ mult! · Q^i[J]"""
    shifted = tuple(d - 1 for d in space.degrees)
    brackets: Dict[int, Dict[Tuple[int, ...], Vector]] = {}
    for i, component in enumerate(components):
        for mono, coeff in component.terms.items():
            value = coeff * interleave_sign(mono, shifted) * multiset_factorial(mono)
            brackets.setdefault(len(mono), {}).setdefault(mono, {})[i] = value
    arities = [n for n in brackets]
    return LInftyAlgebra(space=space, brackets=brackets, max_arity=max(arities + [2]), name=name)


def ce_differential(g: LInftyAlgebra, x: GradedPolynomial) -> GradedPolynomial:
    """Apply d to a truncated CE element; overflow records discarded terms"""
    result = x.apply_derivation(dict(enumerate(vector_field(g))), 1)
    if result.overflow:
        logger.debug("ce_differential discarded %d terms above order %s", result.overflow, x.order)
    return result


@dataclass
class JacobiReport:
    """Outcome of d² = 0 on every dual generator"""

    passed: bool
    order: int
    checked: int
    failure: Optional[str] = None
    violations: List[Tuple[str, Tuple[str, ...], Fraction]] = field(default_factory=list)


def jacobi_check(g: LInftyAlgebra, order: Optional[int] = None) -> JacobiReport:
    """d² x^i = 0 truncated at `order`, for every generator x^i"""
    order = order if order is not None else g.max_arity + 2
    violations = []
    for i in range(g.dim):
        x = GradedPolynomial.variable(g.ce_degrees, i, order)
        squared = ce_differential(g, ce_differential(g, x))
        for mono, coeff in sorted(squared.terms.items()):
            violations.append((g.space.names[i], g.names_of(mono), coeff))
    failure = None
    if violations:
        generator, mono, coeff = violations[0]
        failure = f"d²(x^{generator}) has coefficient {coeff} on {'·'.join(mono) or '1'}; relation violated on ({', '.join(mono)})"
        logger.info("jacobi_check failed for %s: %s", g.name, failure)
    return JacobiReport(passed=not violations, order=order, checked=g.dim, failure=failure, violations=violations)


# the doubled algebra g ⊕ g∨[-2]

def double(g: LInftyAlgebra) -> LInftyAlgebra:
    """
    h = g ⊕ g∨[-2] with brackets extended by the coadjoint action, built as the
    cotangent lift of the CE vector field, and the evaluation pairing.
    """
    n = g.dim
    names = g.space.names + tuple(f"{name}*" for name in g.space.names)
    degrees = g.space.degrees + tuple(2 - d for d in g.space.degrees)
    space = GradedSpace(names, degrees)
    ce = tuple(1 - d for d in degrees)

    q = vector_field(g)
    lifted = [GradedPolynomial(ce, component.terms) for component in q]
    for k in range(n):
        a_k = g.shifted_degrees[k]
        component = GradedPolynomial(ce)
        for j in range(n):
            partial = GradedPolynomial(ce, q[j].terms).left_derivative(k)
            if partial.is_zero():
                continue
            component = component + partial * GradedPolynomial.variable(ce, n + j)
        lifted.append(component.scale(-1 if a_k % 2 == 0 else 1))

    h = from_vector_field(space, lifted, name=f"double({g.name})")
    h.max_arity = g.max_arity
    h.nilpotent_curvature = g.nilpotent_curvature
    pairing = {}
    for i in range(n):
        pairing[(i, n + i)] = Fraction(1)
        pairing[(n + i, i)] = Fraction(-1 if degrees[i] % 2 else 1)
    h.pairing = pairing
    return h


def pairing_matrix(h: LInftyAlgebra) -> List[List[Fraction]]:
    if h.pairing is None:
        raise AlgebraError(f"{h.name} carries no pairing")
    return [[h.pairing.get((a, b), Fraction(0)) for b in range(h.dim)] for a in range(h.dim)]


def shifted_pairing(h: LInftyAlgebra, u: Vector, c: int):
    """ω1(su, s e_c) = (-1)^{|u|} ⟨u, e_c⟩"""
    total = 0
    for m, coeff in u.items():
        value = h.pairing.get((m, c), 0)
        if value:
            total = total + coeff * (value if h.space.degree(m) % 2 == 0 else -value)
    return total


def pairing_tensor(h: LInftyAlgebra) -> SparseGradedTensor:
    """ω1 on basis pairs, legs (in, in), degree -2"""
    if h.pairing is None:
        raise AlgebraError(f"{h.name} carries no pairing")
    entries = {(a, c): shifted_pairing(h, {a: Fraction(1)}, c) for a in range(h.dim) for c in range(h.dim)}
    try:
        return SparseGradedTensor(((h.space, IN), (h.space, IN)), entries, -2)
    except GradedError as e:
        raise AlgebraError(f"pairing of {h.name} is not of degree -2: {e}") from None


@dataclass
class CyclicReport:
    passed: bool
    checked: int
    failure: Optional[str] = None


def cyclic_check(h: LInftyAlgebra) -> CyclicReport:
    """
    C(x_1..x_{n+1}) = ω1(ℓ_n(x_1..x_n), x_{n+1}) must be graded-symmetric on
    h[1]; with ℓ_n symmetric already it is enough to swap the last two slots.
    """
    if h.pairing is None:
        raise AlgebraError(f"{h.name} carries no pairing")
    shifted = h.shifted_degrees
    checked = 0
    for n in range(1, h.max_arity + 1):
        for head in itertools.combinations_with_replacement(range(h.dim), n - 1):
            for a in range(h.dim):
                for b in range(h.dim):
                    lhs = shifted_pairing(h, h.bracket(head + (a,)), b)
                    rhs = shifted_pairing(h, h.bracket(head + (b,)), a)
                    sign = -1 if shifted[a] % 2 and shifted[b] % 2 else 1
                    checked += 1
                    if lhs != sign * rhs:
                        names = h.names_of(head + (a, b))
                        return CyclicReport(False, checked, f"cyclic invariance fails on ({', '.join(names)}): {lhs} != {sign * rhs}")
    return CyclicReport(True, checked)


# Maurer-Cartan

def maurer_cartan_residual(g: LInftyAlgebra, phi: Dict, order: int) -> Vector:
    """
    Σ_{n ≤ order} ℓ_n(φ^n)/n! for φ = Σ c^j e_j of total degree 1.

    The coefficient c^j carries degree 1 - |e_j|; it is passed as a commuting
    scalar and the symmetric-power sign s_J of the generator ordering is
    applied, so parameters attached to degree-1 elements behave as plain
    numbers and odd parameters square to zero.
    """
    phi = {(g.space.index(k) if isinstance(k, str) else k): v for k, v in phi.items() if not is_zero(v)}
    residual: Vector = {}
    for n in range(0, order + 1):
        for word, output in g.brackets.get(n, {}).items():
            if any(j not in phi for j in word):
                continue
            coeff = Fraction(interleave_sign(word, g.shifted_degrees), multiset_factorial(word))
            for j in word:
                coeff = coeff * phi[j]
            for i, c in output.items():
                residual[i] = residual.get(i, 0) + coeff * c
    return {i: c for i, c in residual.items() if not is_zero(c)}


# reduced CE cohomology

def ce_monomials(degrees: Sequence[int], max_size: int, min_size: int = 1) -> Dict[int, List[Monomial]]:
    """Monomials of size min_size..max_size grouped by cohomological degree"""
    by_degree: Dict[int, List[Monomial]] = {}
    for size in range(min_size, max_size + 1):
        for mono in itertools.combinations_with_replacement(range(len(degrees)), size):
            if any(a == b and degrees[a] % 2 for a, b in zip(mono, mono[1:])):
                continue
            by_degree.setdefault(sum(degrees[i] for i in mono), []).append(mono)
    return by_degree


def _rank(columns: List[Dict[Monomial, Fraction]], rows: List[Monomial]) -> int:
    if not columns or not rows:
        return 0
    index = {mono: r for r, mono in enumerate(rows)}
    matrix = sympy.zeros(len(rows), len(columns))
    for c, column in enumerate(columns):
        for mono, value in column.items():
            value = Fraction(value)
            matrix[index[mono], c] = sympy.Rational(value.numerator, value.denominator)
    return matrix.rank()


def reduced_ce_cohomology_ranks(g: LInftyAlgebra, degree_range: Iterable[int], trunc: int) -> Dict[int, int]:
    """Ranks of H^k of (Sym^{1..trunc}(g∨[-1]), d), exact over ℚ"""
    degrees_wanted = list(degree_range)
    if g.is_curved:
        raise AlgebraError(f"reduced CE cohomology needs ℓ0 = 0 ({g.name or 'algebra'} is curved)")
    if not degrees_wanted:
        return {}
    monomials = ce_monomials(g.ce_degrees, trunc)
    q = dict(enumerate(vector_field(g, trunc)))

    def differential_rank(k: int) -> int:
        source = monomials.get(k, [])
        target = monomials.get(k + 1, [])
        columns = []
        for mono in source:
            image = GradedPolynomial(g.ce_degrees, {mono: Fraction(1)}, trunc).apply_derivation(q, 1)
            columns.append(image.terms)
        return _rank(columns, target)

    ranks = {}
    for k in degrees_wanted:
        dim = len(monomials.get(k, []))
        ranks[k] = dim - differential_rank(k) - differential_rank(k - 1)
    logger.info("reduced CE cohomology of %s up to size %d: %s", g.name, trunc, ranks)
    return ranks


def obstruction_ranks(g: LInftyAlgebra, trunc: int) -> Dict[int, int]:
    """Ranks in degrees 1 and 2 of C*_red(g) ⊕ C*_red(g)[1]"""
    h = reduced_ce_cohomology_ranks(g, range(1, 4), trunc)
    return {1: h[1] + h[2], 2: h[2] + h[3]}


if __name__ == "__main__":
    e1e2 = load_algebra({
        "basis": [{"name": "e1", "degree": 0}, {"name": "e2", "degree": 0}],
        "brackets": [{"arity": 2, "inputs": ["e1", "e2"], "output": [{"basis": "e1", "coeff": "1"}]}],
    }, name="e1e2")
    print("d x:", vector_field(e1e2))
    print("jacobi:", jacobi_check(e1e2).passed)
    print("double jacobi:", jacobi_check(double(e1e2)).passed)
    print("koszul check:", koszul_sign([1, 0], [1, 1]))
