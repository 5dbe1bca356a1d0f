"""
Stable Graphs
Typed graphs up to one loop: enumeration, automorphisms and Lie-factor weights
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from graded import is_zero
from linfty import LInftyAlgebra
from polynomial import GradedPolynomial, Monomial, merge_monomials

logger = logging.getLogger(__name__)

INWARD = "inward-alpha"
OUTWARD = "outward-beta"


class GraphError(ValueError):
    """Graph outside the typed one-loop class, or inputs that do not match its tails"""


@dataclass(frozen=True)
class StableGraph:
    """
    A connected typed graph. Every genus-0 vertex has one β-slot: it feeds the
    α-slot of targets[v], or the outward tail when targets[v] is None. Genus-1
    vertices have no β-slot. in_tails[v] counts the inward α-tails at v.
    Slots at a vertex are interchangeable.
    """

    genera: Tuple[int, ...]
    targets: Tuple[Optional[int], ...]
    in_tails: Tuple[int, ...]

    def __post_init__(self):
        n = len(self.genera)
        if not (len(self.targets) == len(self.in_tails) == n) or n == 0:
            raise GraphError("genera, targets and in_tails must describe the same non-empty vertex set")
        for v, (g, t) in enumerate(zip(self.genera, self.targets)):
            if g not in (0, 1):
                raise GraphError(f"vertex {v} has genus {g}")
            if g == 1 and t is not None:
                raise GraphError(f"genus-1 vertex {v} has no β-slot to send along an edge")

    @property
    def n_vertices(self) -> int:
        return len(self.genera)

    @property
    def internal_edges(self) -> List[Tuple[int, int]]:
        """(source, target): the β-slot of source meets an α-slot of target"""
        return [(v, t) for v, t in enumerate(self.targets) if t is not None]

    def in_degree(self, v: int) -> int:
        return sum(1 for t in self.targets if t == v)

    def has_out_tail(self, v: int) -> bool:
        return self.genera[v] == 0 and self.targets[v] is None

    def valence(self, v: int) -> int:
        return self.in_degree(v) + self.in_tails[v] + (1 if self.genera[v] == 0 else 0)

    @property
    def vertices(self) -> List[Tuple[int, int]]:
        return [(g, self.valence(v)) for v, g in enumerate(self.genera)]

    @property
    def tails(self) -> List[Tuple[int, str]]:
        """Inward tails in vertex order, then the outward tail if present"""
        out = [(v, INWARD) for v in range(self.n_vertices) for _ in range(self.in_tails[v])]
        out += [(v, OUTWARD) for v in range(self.n_vertices) if self.has_out_tail(v)]
        return out

    @property
    def loops(self) -> int:
        return len(self.internal_edges) - self.n_vertices + 1

    @property
    def genus(self) -> int:
        return self.loops + sum(self.genera)

    def cycle(self) -> List[int]:
        """Vertices of the unique cycle in flow order, empty for trees"""
        for start in range(self.n_vertices):
            seen, v = [], start
            while v is not None and v not in seen:
                seen.append(v)
                v = self.targets[v]
            if v is not None:
                return seen[seen.index(v):]
        return []

    def is_wheel(self) -> bool:
        return self.loops == 1 and len(self.cycle()) == self.n_vertices

    def children(self, v: int) -> List[int]:
        return [u for u, t in enumerate(self.targets) if t == v]

    def check_typing(self) -> None:
        """Every internal edge runs from a β-slot into an α-slot; wheels have inward tails only"""
        for v in range(self.n_vertices):
            if self.genera[v] == 0 and self.targets[v] is not None and self.genera[self.targets[v]] not in (0, 1):
                raise GraphError(f"edge from {v} ends outside the graph")
        outward = sum(1 for v in range(self.n_vertices) if self.has_out_tail(v))
        if self.loops == 1 and outward:
            raise GraphError("a one-loop graph has no outward tail")
        if self.loops > 1 or self.genus > 1:
            raise GraphError(f"genus {self.genus} is beyond one loop")
        if outward > 1:
            raise GraphError("at most one outward tail")

    def _invariant(self, v: int) -> Tuple[int, int, int, int]:
        return (self.genera[v], self.in_tails[v], self.in_degree(v), int(self.has_out_tail(v)))

    def _relabelings(self) -> Iterator[Tuple[int, ...]]:
        """Vertex bijections preserving local invariants; perm[old] = new"""
        order = sorted(range(self.n_vertices), key=self._invariant)
        groups = [list(g) for _, g in itertools.groupby(order, key=self._invariant)]
        slots = []
        start = 0
        for group in groups:
            slots.append(list(range(start, start + len(group))))
            start += len(group)
        for choice in itertools.product(*[itertools.permutations(s) for s in slots]):
            perm = [0] * self.n_vertices
            for group, image in zip(groups, choice):
                for old, new in zip(group, image):
                    perm[old] = new
            yield tuple(perm)

    def _relabel(self, perm: Sequence[int]) -> Tuple:
        n = self.n_vertices
        desc = [None] * n
        for old in range(n):
            target = self.targets[old]
            desc[perm[old]] = (self.genera[old], self.in_tails[old], -1 if target is None else perm[target])
        return tuple(desc)

    def canonical_form(self) -> Tuple:
        return min(self._relabel(perm) for perm in self._relabelings())

    def certificate(self) -> str:
        """Canonical text: vertex list, sorted edge list, tail list"""
        form = self.canonical_form()
        vertices = ",".join(f"g{g}" for g, _, _ in form)
        edges = ",".join(f"{v}>{t}" for v, (_, _, t) in enumerate(form) if t >= 0)
        tails = ",".join(f"{v}:{k}a" + ("+b" if t < 0 and g == 0 else "") for v, (g, k, t) in enumerate(form))
        return f"V[{vertices}] E[{edges}] T[{tails}]"

    @classmethod
    def from_canonical(cls, form: Tuple) -> "StableGraph":
        return cls(
            tuple(g for g, _, _ in form),
            tuple(None if t < 0 else t for _, _, t in form),
            tuple(k for _, k, _ in form),
        )


def automorphism_order(graph: StableGraph, labeled: bool = False) -> int:
    """
    |Aut γ|. With unlabeled tails the tails at one vertex permute freely; with
    labeled tails every vertex carrying a tail is fixed.
    """
    identity = graph._relabel(tuple(range(graph.n_vertices)))
    count = 0
    for perm in graph._relabelings():
        if labeled and any(perm[v] != v for v in range(graph.n_vertices) if graph.in_tails[v] or graph.has_out_tail(v)):
            continue
        if graph._relabel(perm) == identity:
            count += 1
    if labeled:
        return count
    for k in graph.in_tails:
        count *= math.factorial(k)
    return count


def _valence_window(genus: int, fixed: int, min_valence: int, max_valence: int) -> range:
    low = 1 if genus == 1 else min_valence
    return range(max(0, low - fixed), max_valence - fixed + 1)


def _with_tails(genera, targets, min_valence, max_valence) -> Iterator[StableGraph]:
    n = len(genera)
    fixed = [sum(1 for t in targets if t == v) + (1 if genera[v] == 0 else 0) for v in range(n)]
    windows = [_valence_window(genera[v], fixed[v], min_valence, max_valence) for v in range(n)]
    for tails in itertools.product(*windows):
        yield StableGraph(tuple(genera), tuple(targets), tuple(tails))


def _reaches(targets, v, root) -> bool:
    seen = set()
    while v is not None and v not in seen:
        if v == root:
            return True
        seen.add(v)
        v = targets[v]
    return False


def enumerate_graphs(
    max_vertices: int,
    max_valence: int,
    loops: int,
    min_valence: int = 3,
    genus_one: bool = False,
) -> List[StableGraph]:
    """
    One representative per isomorphism class of connected typed graphs with
    first Betti number `loops`. With genus_one, trees whose root is a genus-1
    vertex are included as well.
    """
    if loops not in (0, 1):
        raise GraphError("only trees and one-loop graphs exist in this theory")
    if max_vertices > 8:
        raise GraphError("graph enumeration is limited to 8 vertices")

    seen: Dict[Tuple, StableGraph] = {}
    for n in range(1, max_vertices + 1):
        genus_patterns = [tuple([0] * n)]
        if loops == 0 and genus_one:
            genus_patterns.append(tuple([1] + [0] * (n - 1)))
        for genera in genus_patterns:
            for targets in itertools.product(*[[None] + list(range(n)) if g == 0 else [None] for g in genera]):
                if loops == 1:
                    if None in targets:
                        continue
                    if not all(_reaches(targets, v, c) for c in StableGraph(genera, targets, (0,) * n).cycle() for v in range(n)):
                        continue
                else:
                    roots = [v for v in range(n) if targets[v] is None]
                    if len(roots) != 1 or (genera[0] == 1 and roots != [0]):
                        continue
                    if not all(_reaches(targets, v, roots[0]) for v in range(n)):
                        continue
                for graph in _with_tails(genera, targets, min_valence, max_valence):
                    form = graph.canonical_form()
                    if form not in seen:
                        seen[form] = StableGraph.from_canonical(form)

    graphs = [seen[form] for form in sorted(seen)]
    logger.info("enumerated %d classes (vertices ≤ %d, valence ≤ %d, loops %d)", len(graphs), max_vertices, max_valence, loops)
    return graphs


def enumerate_wheels(n: int, max_valence: int, min_valence: int = 3) -> List[StableGraph]:
    """Wheels with exactly n vertices, all on the cycle, tails attached directly"""
    targets = tuple((v + 1) % n for v in range(n))
    seen = {}
    low = max(0, min_valence - 2)
    for tails in itertools.product(range(low, max_valence - 1), repeat=n):
        form = StableGraph((0,) * n, targets, tails).canonical_form()
        seen.setdefault(form, StableGraph.from_canonical(form))
    return [seen[form] for form in sorted(seen)]


# Lie weights

def _as_vector(g: LInftyAlgebra, element) -> Dict[int, object]:
    if isinstance(element, dict):
        return {(g.space.index(k) if isinstance(k, str) else k): v for k, v in element.items()}
    if isinstance(element, str):
        return {g.space.index(element): Fraction(1)}
    return {int(element): Fraction(1)}


def _exact(value) -> sympy.Rational:
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def _fraction(value) -> Fraction:
    return Fraction(int(value.p), int(value.q))


class GradedMatrix:
    """
    Square matrix whose entries are α-polynomials, kept as Σ_J t^J·A_J with
    exact sympy blocks A_J. Coefficients stand to the left of the matrix, so a
    product multiplies the monomials t^J graded-commutatively in order.
    """

    def __init__(self, dim: int, blocks: Dict[Monomial, sympy.Matrix] = None, degrees: Optional[Tuple[int, ...]] = None):
        self.dim = dim
        self.degrees = degrees
        self.blocks: Dict[Monomial, sympy.Matrix] = {}
        for mono, block in (blocks or {}).items():
            self._accumulate(mono, block)

    def _accumulate(self, mono: Monomial, block: sympy.Matrix) -> None:
        total = self.blocks[mono] + block if mono in self.blocks else block
        if total.is_zero_matrix:
            self.blocks.pop(mono, None)
        else:
            self.blocks[mono] = total

    @classmethod
    def identity(cls, dim: int, degrees: Optional[Tuple[int, ...]] = None) -> "GradedMatrix":
        return cls(dim, {(): sympy.eye(dim)}, degrees)

    @classmethod
    def from_entries(cls, dim: int, entries: Dict[Tuple[int, int], object]) -> "GradedMatrix":
        """Entries (row, column) → scalar or GradedPolynomial"""
        degrees = next((v.degrees for v in entries.values() if isinstance(v, GradedPolynomial)), None)
        blocks: Dict[Monomial, sympy.Matrix] = {}
        for (i, j), value in entries.items():
            terms = value.terms if isinstance(value, GradedPolynomial) else {(): value}
            for mono, c in terms.items():
                if is_zero(c):
                    continue
                block = blocks.setdefault(mono, sympy.zeros(dim, dim))
                block[i, j] += _exact(c)
        return cls(dim, blocks, degrees)

    def is_zero(self) -> bool:
        return not self.blocks

    def __matmul__(self, other: "GradedMatrix") -> "GradedMatrix":
        degrees = self.degrees or other.degrees
        out = GradedMatrix(self.dim, degrees=degrees)
        for mono_a, a in self.blocks.items():
            for mono_b, b in other.blocks.items():
                word, sign = merge_monomials(mono_a, mono_b, degrees) if degrees else ((), 1)
                if word is None:
                    continue
                out._accumulate(word, sign * (a * b))
        return out

    def power(self, k: int) -> "GradedMatrix":
        result = GradedMatrix.identity(self.dim, self.degrees)
        for _ in range(k):
            result = self @ result
        return result

    def supertrace(self, space_degrees: Sequence[int]):
        """Σ_i (-1)^{|e_i|} M_ii, a Fraction or an α-polynomial"""
        signs = sympy.diag(*[-1 if d % 2 else 1 for d in space_degrees])
        traces = {mono: _fraction((signs * block).trace()) for mono, block in self.blocks.items()}
        if self.degrees is None:
            return traces.get((), Fraction(0))
        return GradedPolynomial(self.degrees, traces)

    def to_rows(self) -> List[List]:
        rows: List[List] = [[0] * self.dim for _ in range(self.dim)]
        for mono, block in self.blocks.items():
            for i in range(self.dim):
                for j in range(self.dim):
                    if block[i, j] != 0:
                        c = _fraction(block[i, j])
                        value = GradedPolynomial(self.degrees, {mono: c}) if self.degrees else c
                        rows[i][j] = rows[i][j] + value
        return rows

    def to_numpy(self) -> np.ndarray:
        if set(self.blocks) - {()}:
            raise GraphError("only a constant matrix has a numeric form")
        block = self.blocks.get((), sympy.zeros(self.dim, self.dim))
        return sympy.matrix2numpy(block, dtype=complex)


def _vertex_value(graph: StableGraph, g: LInftyAlgebra, v: int, tail_inputs: Dict[int, List], extra=None):
    args = [_tree_value(graph, g, u, tail_inputs) for u in graph.children(v) if u not in (extra or ())]
    args += tail_inputs[v]
    return args


def _tree_value(graph: StableGraph, g: LInftyAlgebra, v: int, tail_inputs) -> Dict[int, object]:
    if graph.genera[v] != 0:
        raise GraphError("genus-1 vertices carry no Lie factor")
    return g.bracket_of_vectors(_vertex_value(graph, g, v, tail_inputs))


def vertex_matrix(g: LInftyAlgebra, args: Sequence[Dict[int, object]]) -> GradedMatrix:
    """m ↦ ℓ_k(args..., m) as a matrix"""
    entries = {}
    for m in range(g.dim):
        for i, c in g.bracket_of_vectors(list(args) + [{m: Fraction(1)}]).items():
            entries[(i, m)] = c
    return GradedMatrix.from_entries(g.dim, entries)


def wheel_matrices(graph: StableGraph, g: LInftyAlgebra, inputs: Sequence) -> List[GradedMatrix]:
    """Vertex matrices of a one-loop graph in flow order around the cycle"""
    tail_inputs = _split_inputs(graph, g, inputs)
    cycle = graph.cycle()
    matrices = []
    for position, v in enumerate(cycle):
        predecessor = cycle[position - 1]
        args = _vertex_value(graph, g, v, tail_inputs, extra=(predecessor,))
        matrices.append(vertex_matrix(g, args))
    return matrices


def _split_inputs(graph: StableGraph, g: LInftyAlgebra, inputs: Sequence) -> Dict[int, List]:
    tails = graph.tails
    if len(inputs) != len(tails):
        raise GraphError(f"{len(inputs)} inputs for {len(tails)} tails")
    split: Dict[int, List] = {v: [] for v in range(graph.n_vertices)}
    for (v, orientation), element in zip(tails, inputs):
        if orientation == INWARD:
            split[v].append(_as_vector(g, element))
    return split


def lie_weight(graph: StableGraph, g: LInftyAlgebra, inputs: Sequence):
    """
    Contract the brackets at the vertices along the internal edges. For a
    tree the outward tail takes a basis element whose dual reads off the
    root output; for a one-loop graph the weight is the supertrace of the
    composed vertex operators.
    """
    if any(graph.genera):
        raise GraphError("genus-1 vertices carry no Lie factor")
    if graph.loops == 0:
        tail_inputs = _split_inputs(graph, g, inputs)
        root = next(v for v in range(graph.n_vertices) if graph.has_out_tail(v))
        output = _tree_value(graph, g, root, tail_inputs)
        dual = _as_vector(g, inputs[-1])
        total = 0
        for i, c in dual.items():
            if i in output:
                total = total + c * output[i]
        return total
    matrices = wheel_matrices(graph, g, inputs)
    product = matrices[0]
    for m in matrices[1:]:
        product = m @ product
    return product.supertrace(g.space.degrees)


def separable_wheel_weight(graph: StableGraph, g: LInftyAlgebra, inputs: Sequence, eigenvalues: Sequence[float]) -> complex:
    """
    Full contraction of a wheel whose edges carry (mode-diagonal kernel) ⊗
    (identity on g), evaluated with numpy on the tensor product space.
    """
    if not graph.is_wheel():
        raise GraphError("separable weights are defined for wheels")
    kernel = np.diag(np.asarray(eigenvalues, dtype=complex))
    signs = np.diag([-1.0 if d % 2 else 1.0 for d in g.space.degrees])
    product = np.eye(len(eigenvalues) * g.dim, dtype=complex)
    for matrix in wheel_matrices(graph, g, inputs):
        lie = matrix.to_numpy()
        product = np.kron(kernel, lie) @ product
    return complex(np.trace(np.kron(np.eye(len(eigenvalues)), signs) @ product))
