"""Sine/cosine-type kernels, the determinant Δ_{f,g}, and equivalence detectors."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePairError, PreconditionError
from .exprlang import GeneratorFunction, as_generator
from .exprlang import elementary as el
from .means import DEFAULT_GRID, GeneratorPair, Interval

DEFAULT_NODES = 16
DEFAULT_TOL = 1e-8
DET_THRESHOLD = 1e-9
# below this normalized determinant a witness is reported but flagged
CONFIDENT_DET = 1e-6
_RANK_RCOND = 1e-10


class KernelRegime(enum.Enum):
    TRIGONOMETRIC = "trigonometric"
    POLYNOMIAL = "polynomial"
    HYPERBOLIC = "hyperbolic"

    @classmethod
    def of(cls, p: float) -> "KernelRegime":
        if p < 0:
            return cls.TRIGONOMETRIC
        if p > 0:
            return cls.HYPERBOLIC
        return cls.POLYNOMIAL


def S(p: float, x):
    """Sine-type solution of h'' = p h with h(0) = 0, h'(0) = sqrt|p| (1 if p = 0)."""
    if p < 0:
        return el.sin(math.sqrt(-p) * x)
    if p > 0:
        return el.sinh(math.sqrt(p) * x)
    return x


def C(p: float, x):
    """Cosine-type solution of h'' = p h with h(0) = 1, h'(0) = 0."""
    if p < 0:
        return el.cos(math.sqrt(-p) * x)
    if p > 0:
        return el.cosh(math.sqrt(p) * x)
    if isinstance(x, np.ndarray):
        return np.ones_like(x, dtype=float)
    return 1.0 + 0.0 * x


def sine_type(p: float) -> GeneratorFunction:
    p = float(p)
    return GeneratorFunction(lambda v: S(p, v), name=f"S[{p:g}](x)")


def cosine_type(p: float) -> GeneratorFunction:
    p = float(p)
    return GeneratorFunction(lambda v: C(p, v), name=f"C[{p:g}](x)")


def kernel_pair(p: float, h: GeneratorFunction | None = None) -> tuple[GeneratorFunction, GeneratorFunction]:
    """``(S_p ∘ h, C_p ∘ h)``, or ``(S_p, C_p)`` when ``h`` is omitted."""
    s, c = sine_type(p), cosine_type(p)
    if h is None:
        return s, c
    return s.compose(h), c.compose(h)


def sgn(p: float) -> float:
    return float(np.sign(p))


def delta(f, g, x: float, y: float) -> float:
    """Δ_{f,g}(x, y) = f(x) g(y) - f(y) g(x)."""
    f, g = as_generator(f), as_generator(g)
    return f(x) * g(y) - f(y) * g(x)


@dataclass(frozen=True)
class EquivalenceWitness:
    """Coefficients with ``h = s(a f + b g)``, ``k = s(c f + d g)``.

    ``(a, b, c, d)`` is normalized to unit Euclidean norm; ``norm`` is the
    scale ``s`` that was divided out.
    """

    a: float
    b: float
    c: float
    d: float
    residual: float
    norm: float = 1.0
    confident: bool = True

    @property
    def determinant(self) -> float:
        return self.a * self.d - self.c * self.b

    @property
    def gamma(self) -> float:
        """Factor with Δ_{h,k} = gamma · Δ_{f,g} for the unnormalized relation."""
        return self.norm ** 2 * self.determinant

    def raw(self) -> tuple[float, float, float, float]:
        s = self.norm
        return s * self.a, s * self.b, s * self.c, s * self.d


def _matrix(pair: GeneratorPair, xs: np.ndarray) -> np.ndarray:
    return np.column_stack([pair.f.values(xs), pair.g.values(xs)])


def fit_equivalence(pair1: GeneratorPair, pair2: GeneratorPair,
                    nodes: int = DEFAULT_NODES) -> EquivalenceWitness:
    """Least-squares fit of pair2 against pair1; always returns the best witness."""
    if nodes < 4:
        raise PreconditionError(f"need at least 4 fit nodes, got {nodes}")
    domain = pair1.domain.intersect(pair2.domain)
    xs = domain.chebyshev(nodes)
    A = _matrix(pair1, xs)
    sv = np.linalg.svd(A, compute_uv=False)
    if sv[0] == 0 or sv[-1] / sv[0] < _RANK_RCOND:
        raise DegeneratePairError(
            f"{pair1.f.name} and {pair1.g.name} are numerically linearly dependent")
    rhs = _matrix(pair2, xs)
    coef, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    (a, c), (b, d) = (float(v) for v in coef[0]), (float(v) for v in coef[1])

    grid = domain.grid(DEFAULT_GRID)
    F = _matrix(pair1, grid)
    H = _matrix(pair2, grid)
    err = np.abs(H - F @ coef)
    scale = float(np.max(np.abs(H)))
    residual = float(np.max(err)) / scale if scale > 0 else math.inf

    norm = math.sqrt(a * a + b * b + c * c + d * d)
    if norm == 0:
        return EquivalenceWitness(0.0, 0.0, 0.0, 0.0, residual, 0.0, False)
    a, b, c, d = a / norm, b / norm, c / norm, d / norm
    det = abs(a * d - c * b)
    return EquivalenceWitness(a, b, c, d, residual, norm, bool(det >= CONFIDENT_DET))


def detect_equivalence(pair1: GeneratorPair, pair2: GeneratorPair,
                       nodes: int = DEFAULT_NODES,
                       tol: float = DEFAULT_TOL) -> EquivalenceWitness | None:
    """Witness for ``pair1 ~ pair2`` or ``None`` when they are not equivalent.

    Accepts when the fit reproduces pair2 on an independent 257-point grid to
    ``tol`` relative to its sup-norm and the normalized determinant exceeds
    1e-9.
    """
    w = fit_equivalence(pair1, pair2, nodes)
    if w.residual <= tol and abs(w.determinant) > DET_THRESHOLD:
        return w
    return None


@dataclass(frozen=True)
class AffineFit:
    a: float
    b: float
    residual: float


def fit_affine(phi, psi, domain: Interval, nodes: int = DEFAULT_NODES) -> AffineFit:
    phi, psi = as_generator(phi), as_generator(psi)
    xs = domain.chebyshev(nodes)
    pv = phi.values(xs)
    if np.ptp(pv) <= 1e-14 * max(1.0, float(np.max(np.abs(pv)))):
        raise PreconditionError(f"{phi.name} is numerically constant on the domain")
    A = np.column_stack([pv, np.ones_like(pv)])
    (a, b), *_ = np.linalg.lstsq(A, psi.values(xs), rcond=None)
    grid = domain.grid(DEFAULT_GRID)
    target = psi.values(grid)
    err = np.max(np.abs(target - (a * phi.values(grid) + b)))
    spread = float(np.ptp(target))
    residual = float(err) / spread if spread > 0 else math.inf
    return AffineFit(float(a), float(b), residual)


def detect_affine(phi, psi, domain: Interval,
                  tol: float = DEFAULT_TOL) -> tuple[float, float] | None:
    """``(a, b)`` with ``psi = a phi + b`` on the domain, or ``None``.

    The residual is measured relative to the range of psi, which makes the
    test invariant under affine changes of psi.
    """
    fit = fit_affine(phi, psi, domain)
    if fit.residual <= tol and fit.a != 0:
        return fit.a, fit.b
    return None
