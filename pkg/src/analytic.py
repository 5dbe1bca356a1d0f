"""
Analytic Weights on the Circle
Heat kernels and propagators in Fourier-mode space, zeta-value wheel traces and position-space quadrature
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import quad
from scipy.special import erf

from config import MAX_MODES, QUADRATURE_TOLERANCE, ZETA_ROUNDOFF
from scalars import FormalScalar, evaluate_numeric

logger = logging.getLogger(__name__)

# vertex v carries φ_v(x) = bump((x - center)/half_width), bump(y) = exp(-1/(1-y²)) on (-1, 1);
# neighbouring supports overlap on a slice 0.06 wide
WHEEL_VERTICES: Tuple[Tuple[float, float], ...] = ((-0.62, 0.34), (0.0, 0.34), (0.62, 0.34))


class AnalyticError(ValueError):
    """Scale parameters outside their domain"""


@dataclass(frozen=True)
class ModeModel:
    """Fourier modes e^{2πikx/ℓ}, |k| ≤ K, each as a function and as a 1-form"""

    cutoff: int
    length: float = 1.0

    def __post_init__(self):
        if self.cutoff < 0 or self.cutoff > MAX_MODES:
            raise AnalyticError(f"mode cutoff must lie in 0..{MAX_MODES}, got {self.cutoff}")
        if self.length <= 0:
            raise AnalyticError(f"circle length must be positive, got {self.length}")

    @property
    def modes(self) -> np.ndarray:
        return np.arange(-self.cutoff, self.cutoff + 1)

    @property
    def size(self) -> int:
        return 2 * self.cutoff + 1

    def position(self, k: int) -> int:
        return k + self.cutoff

    @property
    def laplacian(self) -> np.ndarray:
        """Eigenvalues (2πk/ℓ)² of the Laplacian"""
        return (2.0 * math.pi * self.modes / self.length) ** 2

    @property
    def derivative(self) -> np.ndarray:
        """Eigenvalues 2πik/ℓ of d on mode k"""
        return 2j * math.pi * self.modes / self.length


@dataclass
class ScaleKernel:
    """A mode-diagonal operator: heat kernel K_t or propagator P_ε^L"""

    model: ModeModel
    eigenvalues: np.ndarray
    kind: str
    params: Tuple[float, ...] = ()

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.eigenvalues)

    def eigenvalue(self, k: int):
        return self.eigenvalues[self.model.position(k)]

    def apply(self, coefficients: np.ndarray) -> np.ndarray:
        return self.eigenvalues * np.asarray(coefficients)

    def compose(self, other: "ScaleKernel") -> "ScaleKernel":
        return ScaleKernel(self.model, self.eigenvalues * other.eigenvalues, f"{self.kind}∘{other.kind}")

    def __add__(self, other: "ScaleKernel") -> "ScaleKernel":
        return ScaleKernel(self.model, self.eigenvalues + other.eigenvalues, f"{self.kind}+{other.kind}")

    def __sub__(self, other: "ScaleKernel") -> "ScaleKernel":
        return ScaleKernel(self.model, self.eigenvalues - other.eigenvalues, f"{self.kind}-{other.kind}")


def _decay(model: ModeModel, t: float) -> np.ndarray:
    """e^{-tλ_k}, with mode 0 kept at 1 for t = ∞"""
    lam = model.laplacian
    out = np.ones_like(lam)
    nonzero = lam != 0
    out[nonzero] = np.exp(-t * lam[nonzero]) if math.isfinite(t) else 0.0
    return out


def heat_kernel(model: ModeModel, t: float) -> ScaleKernel:
    if not t > 0:
        raise AnalyticError(f"heat kernel needs t > 0, got {t}")
    return ScaleKernel(model, _decay(model, t), "K", (t,))


def identity_kernel(model: ModeModel) -> ScaleKernel:
    """K_0, the identity on the truncated mode space"""
    return ScaleKernel(model, np.ones(model.size), "K", (0.0,))


def propagator(model: ModeModel, epsilon: float, L: float) -> ScaleKernel:
    """
    P_ε^L on mode k ≠ 0: ℓ(e^{-ελ_k} - e^{-Lλ_k})/((2π)²k), zero on mode 0.
    L may be math.inf; ε may be 0.
    """
    if epsilon < 0:
        raise AnalyticError(f"ε must be ≥ 0, got {epsilon}")
    if epsilon > L:
        raise AnalyticError(f"propagator needs ε ≤ L, got ε={epsilon}, L={L}")
    k = model.modes
    values = np.zeros(model.size)
    nonzero = k != 0
    difference = _decay(model, epsilon) - _decay(model, L)
    values[nonzero] = model.length * difference[nonzero] / ((2.0 * math.pi) ** 2 * k[nonzero])
    return ScaleKernel(model, values, "P", (epsilon, L))


@dataclass
class NumericReport:
    """{quantity, K, epsilon, L, value, target, abs_err, bound}"""

    quantity: str
    K: int
    value: float
    target: float
    abs_err: float
    bound: float
    passed: bool
    epsilon: Optional[float] = None
    L: Optional[float] = None
    details: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        out = {
            "quantity": self.quantity,
            "K": self.K,
            "epsilon": self.epsilon,
            "L": self.L,
            "value": self.value,
            "target": self.target,
            "abs_err": self.abs_err,
            "bound": self.bound,
            "passed": self.passed,
        }
        if self.details:
            out["details"] = self.details
        return out


def semigroup_check(model: ModeModel, s: float, t: float) -> float:
    """max |K_s∘K_t - K_{s+t}| over the modes"""
    lhs = heat_kernel(model, s).compose(heat_kernel(model, t))
    return float(np.max(np.abs(lhs.eigenvalues - heat_kernel(model, s + t).eigenvalues)))


def propagator_additivity_check(model: ModeModel, epsilon: float, middle: float, L: float) -> float:
    """max |P_ε^M + P_M^L - P_ε^L|"""
    total = propagator(model, epsilon, middle) + propagator(model, middle, L)
    return float(np.max(np.abs(total.eigenvalues - propagator(model, epsilon, L).eigenvalues)))


def position_kernel(model: ModeModel, kernel: ScaleKernel, xs: Sequence[float]) -> np.ndarray:
    """
    ((2π)²/(iℓ)) Σ_k p_k e^{2πikx/ℓ}, summed over k > 0 using p_{-k} = -p_k,
    which the propagator satisfies.
    """
    xs = np.asarray(xs, dtype=float)
    k = np.arange(1, model.cutoff + 1)
    p = kernel.eigenvalues[model.cutoff + 1:]
    phases = np.sin(2.0 * math.pi * np.outer(xs, k) / model.length)
    return (8.0 * math.pi ** 2 / model.length) * phases @ p


def sign_limit(model: ModeModel, xs: Optional[Sequence[float]] = None, tolerance: float = 0.01) -> NumericReport:
    """
    Position-space P_0^∞ against π·sign(x) - 2πx/ℓ, the step function
    corrected by the zero-mode term a circle of length ℓ forces.
    """
    if xs is None:
        xs = np.concatenate([np.linspace(0.05, 0.5, 46), -np.linspace(0.05, 0.5, 46)]) * model.length
    xs = np.asarray(xs, dtype=float)
    values = position_kernel(model, propagator(model, 0.0, math.inf), xs)
    target = math.pi * np.sign(xs) - 2.0 * math.pi * xs / model.length
    deviation = float(np.max(np.abs(values - target)))
    raw = float(np.max(np.abs(values - math.pi * np.sign(xs))))
    logger.info("sign limit at K=%d: corrected deviation %.3e, uncorrected %.3e", model.cutoff, deviation, raw)
    return NumericReport(
        "sign-limit", model.cutoff, float(values[0]), float(target[0]), deviation, tolerance, deviation <= tolerance,
        epsilon=0.0, L=math.inf, details={"uncorrected_deviation": raw, "points": len(xs)},
    )


def wheel_trace_target(n: int) -> FormalScalar:
    """2ζ(n)/(2π)^{2n} for even n, 0 for odd n"""
    if n < 1:
        raise AnalyticError(f"wheels have at least one vertex, got n={n}")
    if n % 2:
        return FormalScalar()
    return FormalScalar({(-2 * n, (n,)): 2})


def analytic_wheel_trace(model: ModeModel, n: int) -> NumericReport:
    """
    Σ_{0<|k|≤K} p_k^n for P_0^∞, i.e. (1/(2π)^{2n}) Σ k^{-n}, summed in ±k
    pairs so odd n cancels exactly.
    """
    if n < 1:
        raise AnalyticError(f"wheels have at least one vertex, got n={n}")
    p = propagator(model, 0.0, math.inf).eigenvalues
    positive = p[model.cutoff + 1:][::-1]
    negative = p[: model.cutoff]
    value = float(np.sum(positive ** n + negative ** n))
    target_scalar = wheel_trace_target(n)
    target = evaluate_numeric(target_scalar).real
    bound = 0.0
    if n >= 2 and model.cutoff:
        bound = 2.0 / ((n - 1) * model.cutoff ** (n - 1) * (2.0 * math.pi) ** (2 * n))
    bound += ZETA_ROUNDOFF * abs(target)
    err = abs(value - target)
    passed = value == 0.0 if n % 2 else err <= bound
    return NumericReport("zeta-trace", model.cutoff, value, target, err, bound, passed, details={"n": n, "exact": str(target_scalar)})


def heat_defect(model: ModeModel, epsilon: float) -> ScaleKernel:
    """K_ε - K_0"""
    return heat_kernel(model, epsilon) - identity_kernel(model)


def obstruction_analytic_factor(model: ModeModel, n_wheel: int, epsilon: float, L: float = 1.0, test_mode: int = 1) -> float:
    """
    Difference of the n-wheel weight when one edge carries K_ε instead of K_0,
    the remaining n-1 edges carrying P_ε^L, fed by mode `test_mode`:
    Σ_q p_q^{n-1}(e^{-ελ_{q+m}} - 1).
    """
    if n_wheel < 2:
        raise AnalyticError(f"the obstruction factor needs a wheel with n ≥ 2, got {n_wheel}")
    if not epsilon > 0:
        raise AnalyticError(f"ε must be positive, got {epsilon}")
    p = propagator(model, epsilon, L).eigenvalues
    shifted = 2.0 * math.pi * (model.modes + test_mode) / model.length
    defect = np.exp(-epsilon * shifted ** 2) - 1.0
    return float(np.sum(p ** (n_wheel - 1) * defect))


# position-space weights on the line

def bump(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - x[inside] ** 2))
    return out


def vertex_function(vertex: int, x: np.ndarray) -> np.ndarray:
    center, half_width = WHEEL_VERTICES[vertex]
    return bump((np.asarray(x, dtype=float) - center) / half_width)


def edge_kernel(u, epsilon: float, L: float) -> np.ndarray:
    """∫_ε^L t^{-3/2}·u·e^{-u²/t} dt = √π(erf(u/√ε) - erf(u/√L))"""
    u = np.asarray(u, dtype=float)
    upper = erf(u / math.sqrt(epsilon)) if epsilon > 0 else np.sign(u)
    return math.sqrt(math.pi) * (upper - erf(u / math.sqrt(L)))


def edge_kernel_by_quadrature(u: float, epsilon: float, L: float) -> float:
    value, _ = quad(lambda t: t ** -1.5 * u * math.exp(-u * u / t), epsilon, L, limit=200)
    return value


def _midpoints(low: float, high: float, count: int) -> Tuple[np.ndarray, float]:
    h = (high - low) / count
    return low + h * (np.arange(count) + 0.5), h


def _wheel_integral(n: int, epsilon: float, L: float, points: int, x_points: int) -> float:
    """
    ∫ ∏_v φ_v(x_v) ∏_v P(x_v - x_{v+1}) dx in the variables x_1 and
    u_v = x_v - x_{v+1}, tensor midpoint rule on both.
    """
    xs, hx = _midpoints(-1.0, 1.0, x_points)
    if n == 1:
        return float(edge_kernel(0.0, epsilon, L)) * float(np.sum(vertex_function(0, xs)) * hx)
    us, hu = _midpoints(-2.0, 2.0, points)
    p = edge_kernel(us, epsilon, L)
    if n == 2:
        correlation = vertex_function(0, xs)[:, None] * vertex_function(1, xs[:, None] - us[None, :])
        c = correlation.sum(axis=0) * hx
        return float(np.sum(p * edge_kernel(-us, epsilon, L) * c) * hu)
    if n == 3:
        phi0 = vertex_function(0, xs)
        total = 0.0
        for i, u1 in enumerate(us):
            x2 = xs - u1
            weight = phi0 * vertex_function(1, x2)
            if not np.any(weight):
                continue
            phi2 = vertex_function(2, x2[:, None] - us[None, :])
            c = (weight[:, None] * phi2).sum(axis=0) * hx
            total += p[i] * float(np.sum(p * edge_kernel(-u1 - us, epsilon, L) * c))
        return total * hu * hu
    raise AnalyticError("position-space quadrature covers wheels with at most 3 vertices")


@dataclass
class QuadratureResult:
    n: int
    epsilon: float
    L: float
    value: float
    coarse: float
    rel_diff: float
    points: int
    flagged: bool

    def to_dict(self) -> Dict:
        return dict(self.__dict__)


def position_wheel_weight(n: int, epsilon: float, L: float = 1.0, points: Optional[int] = None, x_points: int = 96) -> QuadratureResult:
    """
    Position-space n-wheel weight with bump test functions; the u-grid is
    halved once and the result flagged when the two disagree beyond tolerance.
    """
    if n < 1 or n > len(WHEEL_VERTICES):
        raise AnalyticError(f"position-space weights cover wheels with 1..{len(WHEEL_VERTICES)} vertices, got n={n}")
    if not 0 < epsilon < L:
        raise AnalyticError(f"need 0 < ε < L, got ε={epsilon}, L={L}")
    points = points or (4000 if n <= 2 else 300)
    coarse = _wheel_integral(n, epsilon, L, points, x_points)
    fine = _wheel_integral(n, epsilon, L, 2 * points, x_points)
    scale = max(abs(fine), 1e-300)
    rel_diff = abs(fine - coarse) / scale if fine != coarse else 0.0
    flagged = rel_diff > QUADRATURE_TOLERANCE
    if flagged:
        logger.warning("position wheel weight n=%d ε=%g: step halving moved the value by %.2e relative", n, epsilon, rel_diff)
    return QuadratureResult(n, epsilon, L, fine, coarse, rel_diff, 2 * points, flagged)


def position_wheel_convergence(n: int, epsilons: Sequence[float] = (1e-2, 1e-3, 1e-4), L: float = 1.0, points: Optional[int] = None) -> List[QuadratureResult]:
    return [position_wheel_weight(n, eps, L, points) for eps in epsilons]


def successive_differences(values: Sequence[float]) -> List[float]:
    return [abs(b - a) for a, b in zip(values, values[1:])]

