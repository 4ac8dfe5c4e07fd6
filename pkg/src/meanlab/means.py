"""Weighted quasi-arithmetic and Bajraktarević means."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import (BracketError, ClassViolationError, DerivativeUnavailableError,
                     DomainError, PreconditionError)
from .exprlang import GeneratorFunction, as_generator

DEFAULT_MARGIN = 1e-6
DEFAULT_GRID = 257
DEFAULT_ROOT_TOL = 1e-12


@dataclass(frozen=True)
class Interval:
    """Open interval ``(lo, hi)``.

    Numerical work samples only the inset closed interval
    ``[lo + margin*(hi-lo), hi - margin*(hi-lo)]``.
    """

    lo: float
    hi: float
    margin: float = DEFAULT_MARGIN

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise PreconditionError(f"interval endpoints must be finite, got ({self.lo}, {self.hi})")
        if not self.lo < self.hi:
            raise PreconditionError(f"empty interval ({self.lo}, {self.hi})")
        if not 0.0 <= self.margin < 0.1:
            raise PreconditionError(f"margin must be in [0, 0.1), got {self.margin}")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def inset(self) -> tuple[float, float]:
        d = self.margin * self.width
        return self.lo + d, self.hi - d

    def grid(self, n: int = DEFAULT_GRID) -> np.ndarray:
        a, b = self.inset()
        return np.linspace(a, b, n)

    def chebyshev(self, n: int) -> np.ndarray:
        a, b = self.inset()
        k = np.arange(n)
        nodes = np.cos((2 * k + 1) * np.pi / (2 * n))
        return np.sort(0.5 * (a + b) + 0.5 * (b - a) * nodes)

    def contains(self, x: float) -> bool:
        return self.lo < x < self.hi

    def intersect(self, other: "Interval") -> "Interval":
        return Interval(max(self.lo, other.lo), min(self.hi, other.hi),
                        max(self.margin, other.margin))


@dataclass(frozen=True)
class WeightedSample:
    """Points ``x`` in I^n together with a weight vector in Λ_n."""

    points: tuple[float, ...]
    weights: tuple[float, ...]

    def __init__(self, points: Sequence[float], weights: Sequence[float] | None = None):
        pts = tuple(float(p) for p in points)
        ws = tuple(1.0 for _ in pts) if weights is None else tuple(float(w) for w in weights)
        if not pts:
            raise PreconditionError("a sample needs at least one point")
        if len(ws) != len(pts):
            raise PreconditionError(f"{len(pts)} points but {len(ws)} weights")
        if any(not math.isfinite(v) for v in pts + ws):
            raise PreconditionError("points and weights must be finite")
        if any(w < 0 for w in ws):
            raise PreconditionError("weights must be nonnegative")
        if not sum(ws) > 0:
            raise PreconditionError("weights must have a positive sum")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", ws)

    @property
    def n(self) -> int:
        return len(self.points)

    def active_points(self) -> list[float]:
        """Points carrying positive weight; these bound every weighted mean."""
        return [x for x, w in zip(self.points, self.weights) if w > 0]

    def bounds(self) -> tuple[float, float]:
        act = self.active_points()
        return min(act), max(act)

    def scaled(self, s: float) -> "WeightedSample":
        return WeightedSample(self.points, [s * w for w in self.weights])


@dataclass(frozen=True)
class GeneratorPair:
    """Pair ``(f, g)`` generating the Bajraktarević mean ``B_{g,f}`` on ``domain``."""

    f: GeneratorFunction
    g: GeneratorFunction
    domain: Interval
    grid_size: int = field(default=DEFAULT_GRID, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "f", as_generator(self.f))
        object.__setattr__(self, "g", as_generator(self.g))

    @cached_property
    def ratio(self) -> GeneratorFunction:
        return self.g / self.f

    @property
    def differentiable(self) -> bool:
        return self.f.differentiable and self.g.differentiable

    @cached_property
    def class_violation(self) -> str | None:
        """Reason the pair fails the positivity/monotonicity class, or ``None``."""
        xs = self.domain.grid(self.grid_size)
        try:
            fv = self.f.values(xs)
        except DomainError as exc:
            return f"f cannot be evaluated on the domain: {exc}"
        bad = np.flatnonzero(~(fv > 0))
        if bad.size:
            return f"f is not positive at x={float(xs[bad[0]])!r} (f={float(fv[bad[0]])!r})"
        try:
            if self.differentiable:
                slope = np.array([_ratio_slope_numerator(self.f, self.g, x) for x in xs])
                if not (np.all(slope > 0) or np.all(slope < 0)):
                    major = np.sign(np.median(slope)) or 1.0
                    i = int(np.flatnonzero(np.sign(slope) != major)[0])
                    return f"(g/f)' changes sign or vanishes near x={float(xs[i])!r}"
                return None
        except (DerivativeUnavailableError, DomainError):
            pass
        rv = self.ratio.values(xs)
        d = np.diff(rv)
        if not (np.all(d > 0) or np.all(d < 0)):
            return "g/f is not strictly monotone on the sampled grid"
        return None

    def check_class(self) -> None:
        if self.class_violation is not None:
            raise ClassViolationError(self.class_violation)


def _ratio_slope_numerator(f: GeneratorFunction, g: GeneratorFunction, x: float) -> float:
    # sign of (g/f)' equals the sign of g'f - gf' when f > 0
    jf, jg = f.jet(x, 1), g.jet(x, 1)
    return jg[1] * jf[0] - jg[0] * jf[1]


def _bracket_bounds(bracket) -> tuple[float, float]:
    if isinstance(bracket, Interval):
        return bracket.lo, bracket.hi
    lo, hi = bracket
    return float(lo), float(hi)


def invert_monotone(phi: GeneratorFunction, target: float, bracket,
                    tol: float = DEFAULT_ROOT_TOL, *, check_monotone: bool = True) -> float:
    """Solve ``phi(u) = target`` for ``u`` inside ``bracket``.

    Uses Brent's bracketing method, so convergence is guaranteed once the
    target lies between the endpoint values. The result satisfies
    ``|phi(u) - target| <= tol * max(1, |target|)`` unless phi is so steep
    that adjacent floats already straddle the target.

    Raises
    ------
    BracketError
        ``target`` is outside ``phi(bracket)``.
    PreconditionError
        phi is detectably not strictly monotone on the bracket.
    """
    lo, hi = _bracket_bounds(bracket)
    if not lo < hi:
        raise PreconditionError(f"empty bracket ({lo}, {hi})")
    flo, fhi = phi(lo), phi(hi)
    if flo == fhi:
        raise PreconditionError(f"{phi.name} takes equal values at both ends of ({lo}, {hi})")
    if check_monotone:
        probe = [phi(u) for u in np.linspace(lo, hi, 9)[1:-1]]
        seq = np.array([flo] + probe + [fhi])
        d = np.diff(seq)
        if not (np.all(d > 0) or np.all(d < 0)):
            raise PreconditionError(f"{phi.name} is not strictly monotone on ({lo}, {hi})")
    scale = max(1.0, abs(target))
    ymin, ymax = min(flo, fhi), max(flo, fhi)
    if not (ymin - tol * scale <= target <= ymax + tol * scale):
        raise BracketError(
            f"target {target!r} outside the image [{ymin!r}, {ymax!r}] of ({lo}, {hi})")
    if target <= ymin:
        return lo if flo == ymin else hi
    if target >= ymax:
        return lo if flo == ymax else hi
    xtol = 4.0 * np.finfo(float).eps * max(abs(lo), abs(hi)) + 1e-300
    return brentq(lambda u: phi(u) - target, lo, hi, xtol=xtol,
                  rtol=4.0 * np.finfo(float).eps, maxiter=500)


def quasi_arithmetic_mean(phi, sample: WeightedSample, tol: float = DEFAULT_ROOT_TOL,
                          *, check_monotone: bool = True) -> float:
    """``A_phi(x, λ) = phi^{-1}(Σ λ_i phi(x_i) / Σ λ_i)``."""
    phi = as_generator(phi)
    lo, hi = sample.bounds()
    if lo == hi:
        return lo
    num = 0.0
    den = 0.0
    for x, w in zip(sample.points, sample.weights):
        if w > 0:
            num += w * phi(x)
            den += w
    return invert_monotone(phi, num / den, (lo, hi), tol, check_monotone=check_monotone)


def bajraktarevic_mean(pair: GeneratorPair, sample: WeightedSample,
                       tol: float = DEFAULT_ROOT_TOL, *, check_class: bool = True) -> float:
    """``B_{g,f}(x, λ) = (g/f)^{-1}(Σ λ_i g(x_i) / Σ λ_i f(x_i))``."""
    if check_class:
        pair.check_class()
    lo, hi = sample.bounds()
    if lo == hi:
        return lo
    num = 0.0
    den = 0.0
    for x, w in zip(sample.points, sample.weights):
        if w > 0:
            num += w * pair.g(x)
            den += w * pair.f(x)
    # class membership already guarantees monotonicity of g/f
    return invert_monotone(pair.ratio, num / den, (lo, hi), tol, check_monotone=not check_class)


def mean_property_check(pair: GeneratorPair, sample: WeightedSample) -> bool:
    """True iff ``B_{g,f}`` lies between the extreme positive-weight points."""
    m = bajraktarevic_mean(pair, sample)
    lo, hi = sample.bounds()
    slack = 1e-12 * (hi - lo)
    return lo - slack <= m <= hi + slack
