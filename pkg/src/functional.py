"""
Effective Functionals
Polynomial functionals on the mode model of Ω*(S¹) ⊗ h[1]: RG flow, BV Laplacian and bracket, master equations
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from analytic import ModeModel, heat_kernel, identity_kernel, propagator
from config import KERNEL_FLOOR, MASTER_TOLERANCE
from graded import OUT, SparseGradedTensor, contract, is_zero, sort_with_sign
from linfty import LInftyAlgebra, pairing_tensor, vector_field

logger = logging.getLogger(__name__)

Key = Tuple[int, Tuple[int, ...]]
Coordinate = Tuple[int, int, int]
TermFilter = Callable[[int, Tuple[int, ...]], bool]

MAX_FLOW_STEPS = 32


class FunctionalError(ValueError):
    """Input outside the class of functionals an operation accepts"""


def _exact(value):
    """Keep unit factors exact so the pointwise model stays over ℚ"""
    value = complex(value)
    if value == 1:
        return Fraction(1)
    if value.imag == 0:
        return float(value.real)
    return value


def _fraction(value: sympy.Rational) -> Fraction:
    return Fraction(int(value.p), int(value.q))


class FieldSpace:
    """
    Coordinates φ^(k, f, c) of fields Σ φ^(k,f,c) e^{2πikx/ℓ} (dx)^f ⊗ e_c on a
    mode model, for a doubled algebra h with its pairing. The parity of a
    coordinate is f + |e_c| - 1 mod 2.
    """

    def __init__(self, model: ModeModel, h: LInftyAlgebra):
        if h.pairing is None:
            raise FunctionalError(f"{h.name} carries no pairing; fields need the doubled algebra")
        self.model = model
        self.h = h
        self.coordinates: List[Coordinate] = [
            (int(k), f, c) for k in model.modes for f in (0, 1) for c in range(h.dim)
        ]
        self.index: Dict[Coordinate, int] = {x: i for i, x in enumerate(self.coordinates)}
        shifted = h.shifted_degrees
        self.parities: Tuple[int, ...] = tuple((f + shifted[c]) % 2 for _, f, c in self.coordinates)
        self.beta = frozenset(c for c, name in enumerate(h.space.names) if name.endswith("*"))

        self.pairing = pairing_tensor(h)
        self.casimir = self._casimir()
        size = h.dim
        self.omega = [[self.pairing.entries.get((a, c), Fraction(0)) for c in range(size)] for a in range(size)]
        self.inverse = [[self.casimir.entries.get((a, c), Fraction(0)) for c in range(size)] for a in range(size)]

    def _casimir(self) -> SparseGradedTensor:
        """G = ω1^{-1} with legs (out, out); contracting it into ω1 must give the identity"""
        size = self.h.dim
        omega = sympy.zeros(size, size)
        for (a, c), value in self.pairing.entries.items():
            value = Fraction(value)
            omega[a, c] = sympy.Rational(value.numerator, value.denominator)
        if omega.det() == 0:
            raise FunctionalError(f"the pairing of {self.h.name} is degenerate")
        inverse = omega.inv()
        entries = {(a, c): _fraction(inverse[a, c]) for a in range(size) for c in range(size) if inverse[a, c] != 0}
        casimir = SparseGradedTensor(((self.h.space, OUT), (self.h.space, OUT)), entries, 2)
        unit = contract(self.pairing, casimir, [(1, 0)])
        if unit.entries != {(a, a): Fraction(1) for a in range(size)}:
            raise FunctionalError(f"the Casimir of {self.h.name} does not invert its pairing")
        return casimir

    @property
    def size(self) -> int:
        return len(self.coordinates)

    def coordinate(self, k: int, f: int, c: int) -> int:
        return self.index[(k, f, c)]

    def mode_weight(self, mono: Sequence[int]) -> int:
        """Σ |k| over the legs of a monomial"""
        return sum(abs(self.coordinates[x][0]) for x in mono)

    def moving_legs(self, mono: Sequence[int]) -> int:
        """Number of legs off mode 0"""
        return sum(1 for x in mono if self.coordinates[x][0] != 0)

    def beta_legs(self, mono: Sequence[int]) -> int:
        return sum(1 for x in mono if self.coordinates[x][2] in self.beta)

    def describe(self, x: int) -> Dict:
        k, f, c = self.coordinates[x]
        return {"mode": k, "form": f, "basis": self.h.space.names[c]}


class Functional:
    """Σ coeff · ħ^g · φ^{x_1}···φ^{x_r} over sorted monomials; odd coordinates never repeat"""

    def __init__(self, space: FieldSpace, terms: Optional[Dict[Key, object]] = None):
        self.space = space
        self.terms: Dict[Key, object] = {}
        for key, value in (terms or {}).items():
            self.add_term(key, value)

    def add_term(self, key: Key, value) -> None:
        if is_zero(value):
            return
        total = self.terms.get(key, 0) + value
        if is_zero(total):
            self.terms.pop(key, None)
        else:
            self.terms[key] = total

    def add_word(self, hbar: int, word: Sequence[int], value) -> None:
        """Add value · ħ^hbar · (product of the word in its given order)"""
        mono, sign = sort_with_sign(tuple(word), self.space.parities)
        for a, b in zip(mono, mono[1:]):
            if a == b and self.space.parities[a]:
                return
        self.add_term((hbar, mono), value if sign > 0 else -value)

    def copy(self) -> "Functional":
        return Functional(self.space, dict(self.terms))

    def __add__(self, other: "Functional") -> "Functional":
        out = self.copy()
        for key, value in other.terms.items():
            out.add_term(key, value)
        return out

    def __sub__(self, other: "Functional") -> "Functional":
        return self + other.scale(-1)

    def scale(self, factor) -> "Functional":
        return Functional(self.space, {key: value * factor for key, value in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def norm(self) -> float:
        return max((abs(complex(v)) for v in self.terms.values()), default=0.0)

    def hbar_part(self, power: int) -> "Functional":
        return self.select(lambda hbar, mono: hbar == power)

    def select(self, keep: TermFilter) -> "Functional":
        return Functional(self.space, {key: v for key, v in self.terms.items() if keep(*key)})

    def max_degree(self) -> int:
        return max((len(mono) for _, mono in self.terms), default=0)

    def to_records(self) -> List[Dict]:
        records = []
        for (hbar, mono), value in sorted(self.terms.items()):
            value = complex(value)
            records.append({
                "hbar": hbar,
                "legs": [self.space.describe(x) for x in mono],
                "re": value.real,
                "im": value.imag,
            })
        return records


def degree_restricted(F: Functional, max_degree: int) -> Functional:
    return F.select(lambda hbar, mono: len(mono) <= max_degree)


def harmonic(space: FieldSpace) -> TermFilter:
    """Terms with every leg on mode 0"""
    return lambda hbar, mono: all(space.coordinates[x][0] == 0 for x in mono)


def one_form_window(space: FieldSpace, reach: int) -> TermFilter:
    """
    Terms whose one-form legs all carry |k| ≤ reach. The propagator contracts
    function legs only, so one-form legs pass through the flow untouched and
    the window components of W(P, I) depend only on the window part of I.
    """
    def keep(hbar: int, mono: Tuple[int, ...]) -> bool:
        for x in mono:
            k, f, _ = space.coordinates[x]
            if f == 1 and abs(k) > reach:
                return False
        return True
    return keep


def kernel_reach(model: ModeModel, L: float, floor: float = KERNEL_FLOOR) -> int:
    """Largest |k| whose heat-kernel value e^{-Lλ_k} stays above the floor"""
    values = heat_kernel(model, L).eigenvalues
    return max((abs(int(k)) for k, v in zip(model.modes, values) if v > floor), default=0)


# kernels

@dataclass
class ModeKernel:
    """A two-leg kernel Σ k^{xy} e_x ⊗ e_y, graded symmetric, with its parity"""

    space: FieldSpace
    entries: Dict[Tuple[int, int], object]
    parity: int
    label: str = ""
    partners: Dict[int, List[Tuple[int, object]]] = field(default_factory=dict)

    def __post_init__(self):
        self.entries = {key: value for key, value in self.entries.items() if not is_zero(value)}
        self.partners = {}
        for (x, y), value in self.entries.items():
            self.partners.setdefault(x, []).append((y, value))

    def value(self, x: int, y: int):
        return self.entries.get((x, y), 0)


def bv_kernel(space: FieldSpace, t: float = 0.0) -> ModeKernel:
    """
    K_t, odd: K^{(k,0,c),(-k,1,c')} = e^{-tλ_k} G^{cc'} and
    K^{(k,1,c),(-k,0,c')} = -(-1)^{|e_c'|-1} e^{-tλ_k} G^{cc'}, G the Casimir.
    """
    model = space.model
    decay = identity_kernel(model) if t == 0 else heat_kernel(model, t)
    shifted = space.h.shifted_degrees
    entries = {}
    for k in map(int, model.modes):
        e = _exact(decay.eigenvalue(k))
        for (c, c2), g in space.casimir.entries.items():
            entries[(space.coordinate(k, 0, c), space.coordinate(-k, 1, c2))] = e * g
            twist = 1 if shifted[c2] % 2 else -1
            entries[(space.coordinate(k, 1, c), space.coordinate(-k, 0, c2))] = e * g * twist
    return ModeKernel(space, entries, 1, f"K_{t}")


def propagator_kernel(space: FieldSpace, epsilon: float, L: float) -> ModeKernel:
    """
    P_ε^L, even, on function legs only: P^{(k,0,c),(-k,0,c')} = -2πi·p_k·G^{cc'},
    p_k the propagator eigenvalue; it satisfies [Q, ∂_P] = Δ_ε - Δ_L.
    """
    model = space.model
    p = propagator(model, epsilon, L)
    entries = {}
    for k in map(int, model.modes):
        if k == 0:
            continue
        value = -2j * np.pi * p.eigenvalue(k)
        for (c, c2), g in space.casimir.entries.items():
            entries[(space.coordinate(k, 0, c), space.coordinate(-k, 0, c2))] = complex(value) * float(g)
    return ModeKernel(space, entries, 0, f"P_{epsilon}^{L}")


# second-order operators

def _remove(word: Sequence[int], parities: Sequence[int], position: int) -> Tuple[Tuple[int, ...], int]:
    """Pull word[position] to the front; returns the rest and the Koszul sign"""
    before = sum(parities[x] for x in word[:position])
    sign = -1 if parities[word[position]] and before % 2 else 1
    return tuple(word[:position]) + tuple(word[position + 1:]), sign


def _kernel_pairs(word: Sequence[int], kernel: ModeKernel, left: Sequence[int], right: Sequence[int]) -> Iterator[Tuple[int, int]]:
    """Ordered position pairs (r, s), r in left, s in right, joined by a kernel entry"""
    positions: Dict[int, List[int]] = {}
    for s in right:
        positions.setdefault(word[s], []).append(s)
    for r in left:
        for y, _ in kernel.partners.get(word[r], ()):
            for s in positions.get(y, ()):
                if s != r:
                    yield r, s


def _pair_terms(word: Sequence[int], kernel: ModeKernel, pairs: Iterator[Tuple[int, int]]):
    """½ k^{w_r w_s} ∂_{w_r} ∂_{w_s} on the chosen ordered position pairs"""
    parities = kernel.space.parities
    for r, s in pairs:
        value = kernel.value(word[r], word[s])
        rest, sign_s = _remove(word, parities, s)
        rest, sign_r = _remove(rest, parities, r if r < s else r - 1)
        yield rest, value * Fraction(sign_s * sign_r, 2)


def contraction(kernel: ModeKernel, F: Functional, hbar_shift: int = 0, bound=None) -> Functional:
    """∂_k F = ½ Σ k^{xy} ∂_x ∂_y F"""
    out = Functional(F.space)
    for (hbar, mono), coeff in F.terms.items():
        if bound is not None and len(mono) - 2 > bound(hbar + hbar_shift):
            continue
        positions = range(len(mono))
        for rest, value in _pair_terms(mono, kernel, _kernel_pairs(mono, kernel, positions, positions)):
            out.add_word(hbar + hbar_shift, rest, coeff * value)
    return out


def bracket(kernel: ModeKernel, F: Functional, G: Functional, bound=None) -> Functional:
    """
    {F, G}_k = (-1)^{|F||k|}(∂_k(FG) - (∂_k F)G - (-1)^{|F||k|} F(∂_k G)): the
    cross contractions between F and G, signed term by term of F.
    """
    parities = F.space.parities
    out = Functional(F.space)
    index: Dict[int, List[Key]] = {}
    for key in G.terms:
        for x in set(key[1]):
            index.setdefault(x, []).append(key)
    for (ha, a), ca in F.terms.items():
        if kernel.parity and sum(parities[x] for x in a) % 2:
            ca = -ca
        candidates = set()
        for x in set(a):
            for y, _ in kernel.partners.get(x, ()):
                candidates.update(index.get(y, ()))
        n = len(a)
        for hb, b in candidates:
            hbar = ha + hb
            if bound is not None and n + len(b) - 2 > bound(hbar):
                continue
            word = a + b
            left, right = range(n), range(n, n + len(b))
            pairs = itertools.chain(_kernel_pairs(word, kernel, left, right), _kernel_pairs(word, kernel, right, left))
            cb = G.terms[(hb, b)]
            for rest, value in _pair_terms(word, kernel, pairs):
                out.add_word(hbar, rest, ca * cb * value)
    return out


def bv_laplacian(kernel: ModeKernel, F: Functional) -> Functional:
    if kernel.parity != 1:
        raise FunctionalError("the BV Laplacian contracts against an odd kernel")
    return contraction(kernel, F)


def bv_bracket(kernel: ModeKernel, F: Functional, G: Functional) -> Functional:
    if kernel.parity != 1:
        raise FunctionalError("the BV bracket contracts against an odd kernel")
    return bracket(kernel, F, G)


def apply_q(F: Functional) -> Functional:
    """The de Rham differential as an odd derivation: φ^(k,1,c) ↦ (2πik/ℓ) φ^(k,0,c)"""
    space = F.space
    derivative = space.model.derivative
    out = Functional(space)
    for (hbar, mono), coeff in F.terms.items():
        prefix = 0
        for r, x in enumerate(mono):
            k, f, c = space.coordinates[x]
            if f == 1 and k != 0:
                q = complex(derivative[space.model.position(k)])
                sign = -1 if prefix % 2 else 1
                word = mono[:r] + (space.coordinate(k, 0, c),) + mono[r + 1:]
                out.add_word(hbar, word, coeff * q * sign)
            prefix += space.parities[x]
    return out


# RG flow

def degree_bound(max_degree: int):
    """ħ⁰ terms up to degree D+2, ħ¹ terms up to D, nothing at ħ²"""
    def bound(hbar: int) -> int:
        if hbar == 0:
            return max_degree + 2
        if hbar == 1:
            return max_degree
        return -1
    return bound


def _truncate(F: Functional, bound, window: Optional[TermFilter] = None) -> Functional:
    if window is None:
        return F.select(lambda hbar, mono: len(mono) <= bound(hbar))
    return F.select(lambda hbar, mono: len(mono) <= bound(hbar) and window(hbar, mono))


def rg_flow(kernel: ModeKernel, I: Functional, max_degree: int, window: Optional[TermFilter] = None) -> Functional:
    """
    W(P, I) = ħ log(e^{ħ∂_P} e^{I/ħ}), the sum over connected graphs with at
    most one loop, built from d/ds W(sP) = ħ∂_P W + ½{W, W}_P order by order
    in s: (m+1)W_{m+1} = ħ∂_P W_m + ½ Σ_{a+b=m} {W_a, W_b}_P.

    With a window (see one_form_window) only the components it keeps are
    computed; they come out exactly as in the unrestricted flow.
    """
    if kernel.parity != 0:
        raise FunctionalError("the RG flow contracts along an even propagator")
    for (hbar, mono) in I.terms:
        if hbar == 0 and len(mono) < 3:
            raise FunctionalError(f"classical interaction must be at least cubic, found a degree-{len(mono)} term")
        if hbar >= 2:
            raise FunctionalError("input carries ħ² terms")
    bound = degree_bound(max_degree)
    layers = [_truncate(I, bound, window)]
    for m in range(MAX_FLOW_STEPS):
        nxt = contraction(kernel, layers[m], hbar_shift=1, bound=bound)
        for a in range(m + 1):
            b = m - a
            if a > b:
                break
            term = bracket(kernel, layers[a], layers[b], bound=bound)
            nxt = nxt + term.scale(Fraction(1, 2) if a == b else 1)
        nxt = _truncate(nxt, bound, window).scale(Fraction(1, m + 1))
        if nxt.is_zero():
            break
        layers.append(nxt)
    else:
        raise FunctionalError("RG flow did not terminate under the degree truncation")
    total = Functional(I.space)
    for layer in layers:
        total = total + layer
    logger.info("RG flow %s: %d layers, %d terms", kernel.label, len(layers), len(total.terms))
    return total


# the Chern-Simons functional

def chern_simons_functional(space: FieldSpace, reach: Optional[int] = None) -> Functional:
    """
    I_CS = ℓ Σ_{k_0 + ... + k_n = 0} ξ_c(k_0) Q^c[J] φ^{J}(k_1..k_n), with
    ξ_c = Σ_{c'} ω1(e_c', e_c) φ^(k,1,c') and Q the CE vector field of h:
    the integral of ω1(φ, ℓ_n(φ, ..., φ))/(n+1)! summed over n ≥ 2.
    A reach keeps only the terms with |k_0| ≤ reach.
    """
    h = space.h
    h.require_uncurved("chern_simons_functional")
    if h.brackets.get(1) and any(h.brackets[1].values()):
        raise FunctionalError("ℓ1 belongs to the free part; the interaction starts at ℓ2")
    model = space.model
    modes = [int(k) for k in model.modes]
    limit = model.cutoff if reach is None else min(reach, model.cutoff)
    length = Fraction(1) if model.length == 1 else model.length
    out = Functional(space)
    for c, component in enumerate(vector_field(h)):
        for word, q in component.terms.items():
            if len(word) < 2:
                continue
            for c2 in range(h.dim):
                w = space.omega[c2][c]
                if w == 0:
                    continue
                for ks in itertools.product(modes, repeat=len(word)):
                    k0 = -sum(ks)
                    if abs(k0) > limit:
                        continue
                    legs = [space.coordinate(k0, 1, c2)] + [space.coordinate(k, 0, j) for k, j in zip(ks, word)]
                    out.add_word(0, legs, length * w * q)
    logger.info("I_CS on %d modes: %d terms", model.size, len(out.terms))
    return out


def naive_quantization(space: FieldSpace, L: float, max_degree: int, reach: Optional[int] = None) -> Functional:
    """I_naive[L] = W(P_0^L, I_CS), on the one-form window of the given reach if any"""
    window = None if reach is None else one_form_window(space, reach)
    I = chern_simons_functional(space, reach)
    return rg_flow(propagator_kernel(space, 0.0, L), I, max_degree, window)


@dataclass
class WeightReport:
    passed: bool
    terms: int
    failure: Optional[str] = None


def gm_weight_report(F: Functional) -> WeightReport:
    """Weight one: no ħ≥2, no β-leg at ħ¹, exactly one β-leg at ħ⁰"""
    for (hbar, mono) in sorted(F.terms):
        beta = F.space.beta_legs(mono)
        if hbar >= 2:
            return WeightReport(False, len(F.terms), f"ħ^{hbar} term present")
        if hbar == 1 and beta:
            return WeightReport(False, len(F.terms), f"ħ term with {beta} β-legs")
        if hbar == 0 and beta != 1:
            return WeightReport(False, len(F.terms), f"tree-level term with {beta} β-legs")
    return WeightReport(True, len(F.terms))


def qme_residual(space: FieldSpace, I: Functional, L: float) -> Functional:
    """QI + ½{I, I}_L + ħΔ_L I, i.e. ħ times the scale-L obstruction"""
    K = bv_kernel(space, L)
    residual = apply_q(I) + bracket(K, I, I).scale(Fraction(1, 2)) + contraction(K, I, hbar_shift=1)
    return residual


@dataclass
class MasterReport:
    passed: bool
    tree_level: float
    one_loop: float
    terms_checked: int
    reach: int = 0
    failure: Optional[str] = None


def harmonic_master_residual(space: FieldSpace, I: Functional, L: float) -> Functional:
    """
    The components of QI + ½{I, I}_L + ħΔ_L I with every leg on mode 0.

    Q never lands on mode 0. A cross contraction with harmonic outputs joins
    two legs of momentum 0, so both factors are harmonic; a self-contraction
    with harmonic output removes a ±k pair from a term with at most two legs
    off mode 0.
    """
    K = bv_kernel(space, L)
    on_zero = harmonic(space)
    H = I.select(on_zero)
    near = I.select(lambda hbar, mono: space.moving_legs(mono) <= 2)
    residual = apply_q(H) + bracket(K, H, H).scale(Fraction(1, 2)) + contraction(K, near, hbar_shift=1)
    return residual.select(on_zero)


def master_report(space: FieldSpace, I: Functional, L: float, max_degree: int,
                  tolerance: float = MASTER_TOLERANCE, reach: int = 0) -> MasterReport:
    """
    Gate both orders of the harmonic master residual, each at the degrees the
    D-truncation of I computes exactly: ħ⁰ through D+2, ħ¹ through D.
    """
    residual = harmonic_master_residual(space, I, L)
    tree = degree_restricted(residual.hbar_part(0), max_degree + 2)
    loop = degree_restricted(residual.hbar_part(1), max_degree)
    failure = None
    if tree.norm() > tolerance:
        failure = f"tree-level QME residual {tree.norm():.3e} exceeds {tolerance:.0e}"
    elif loop.norm() > tolerance:
        failure = f"one-loop QME residual {loop.norm():.3e} exceeds {tolerance:.0e}"
    checked = sum(1 for key in I.terms if harmonic(space)(*key))
    return MasterReport(failure is None, tree.norm(), loop.norm(), checked, reach, failure)


def qme_report(space: FieldSpace, L: float, max_degree: int, tolerance: float = MASTER_TOLERANCE) -> MasterReport:
    """
    QME of I_naive[L] on harmonic fields. The flow runs on the one-form window
    whose modes e^{-Lλ_k} clears KERNEL_FLOOR, which holds every term that can
    reach a harmonic component of the residual.
    """
    reach = kernel_reach(space.model, L)
    I = naive_quantization(space, L, max_degree, reach)
    report = master_report(space, I, L, max_degree, tolerance, reach)
    logger.info("QME at L=%g, K=%d, D=%d: tree %.3e, one loop %.3e", L, space.model.cutoff, max_degree,
                report.tree_level, report.one_loop)
    return report


def classical_master_residual(h: LInftyAlgebra) -> Functional:
    """QI + ½{I, I}_0 for I_CS on constant fields, exact over ℚ"""
    space = FieldSpace(ModeModel(0), h)
    I = chern_simons_functional(space)
    return apply_q(I) + bracket(bv_kernel(space, 0.0), I, I).scale(Fraction(1, 2))


def tree_level_on_harmonics(space: FieldSpace, max_degree: int) -> Tuple[Functional, Functional]:
    """I^(0)[∞] and I_CS, both restricted to mode-0 legs"""
    on_zero = harmonic(space)
    tree = lambda hbar, mono: hbar == 0 and on_zero(hbar, mono)
    I = chern_simons_functional(space, reach=0)
    flowed = rg_flow(propagator_kernel(space, 0.0, np.inf), I, max_degree, one_form_window(space, 0))
    return flowed.select(tree), I.select(tree)


@dataclass
class HarmonicReport:
    passed: bool
    kernel_on_harmonic: int
    difference: float
    terms_checked: int
    failure: Optional[str] = None


def harmonic_restriction_check(space: FieldSpace, max_degree: int = 4) -> HarmonicReport:
    """
    P_0^∞ has no entry on a mode-0 leg, so a tree with an internal edge has no
    harmonic component and the flowed tree level equals I_CS on harmonic fields.
    """
    P = propagator_kernel(space, 0.0, np.inf)
    touching = sum(1 for x, y in P.entries if space.coordinates[x][0] == 0 or space.coordinates[y][0] == 0)
    flowed, classical = tree_level_on_harmonics(space, max_degree)
    difference = (flowed - classical).norm()
    failure = None
    if touching:
        failure = f"P(0,∞) has {touching} entries on mode-0 legs"
    elif difference != 0.0:
        failure = f"flowed tree level differs from I_CS on harmonic fields by {difference:.3e}"
    return HarmonicReport(failure is None, touching, difference, len(classical.terms), failure)


def random_functional(space: FieldSpace, degree: int, count: int, seed: int = 0, hbar: int = 0, parity: int = 0) -> Functional:
    """Seeded random homogeneous functional of the given parity, for identities checked numerically"""
    rng = np.random.default_rng(seed)
    out = Functional(space)
    attempts = 0
    while len(out.terms) < count and attempts < 50 * count:
        attempts += 1
        word = tuple(int(x) for x in rng.integers(0, space.size, size=degree))
        if sum(space.parities[x] for x in word) % 2 != parity:
            continue
        out.add_word(hbar, word, complex(rng.normal(), rng.normal()))
    return out
