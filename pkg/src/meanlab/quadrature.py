"""Adaptive Simpson quadrature and tabulated primitives with inversion."""

from __future__ import annotations

import bisect
import math
from typing import Callable

import numpy as np

from .errors import QuadratureError
from .exprlang import GeneratorFunction
from .means import Interval, invert_monotone

DEFAULT_ABS_TOL = 1e-11
TABLE_SIZE = 1025
MAX_DEPTH = 48


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     abs_tol: float = DEFAULT_ABS_TOL, max_depth: int = MAX_DEPTH) -> float:
    """Integral of ``f`` over ``[a, b]`` (``a > b`` gives the negated integral)."""
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m = 0.5 * (a + b)
    fm = f(m)
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    return _simpson(f, a, b, fa, fm, fb, whole, abs_tol, max_depth)


def _simpson(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) * (fa + 4.0 * flm + fm) / 6.0
    right = (b - m) * (fm + 4.0 * frm + fb) / 6.0
    err = left + right - whole
    if not math.isfinite(err):
        raise QuadratureError(f"integrand is not finite on [{a!r}, {b!r}]")
    if abs(err) <= 15.0 * tol:
        return left + right + err / 15.0
    if depth <= 0:
        raise QuadratureError(f"adaptive Simpson did not converge on [{a!r}, {b!r}]")
    return (_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + _simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1))


class PrimitiveTable:
    """Primitive ``H(x) = ∫_ref^x h`` tabulated on the inset domain.

    ``h`` must keep one sign on the domain, so ``H`` is strictly monotone
    and :meth:`inverse` is well defined. Off-node values are the nearest
    node value plus a short quadrature.
    """

    def __init__(self, integrand: Callable[[float], float], domain: Interval,
                 ref: float | None = None, n: int = TABLE_SIZE,
                 abs_tol: float = DEFAULT_ABS_TOL):
        self.integrand = integrand
        self.domain = domain
        self.abs_tol = abs_tol
        lo, hi = domain.inset()
        self.ref = domain.midpoint if ref is None else float(ref)
        if not lo <= self.ref <= hi:
            raise QuadratureError(f"reference point {self.ref!r} outside [{lo!r}, {hi!r}]")
        self.nodes = np.linspace(lo, hi, n)
        # per-segment budget keeps the total error within abs_tol
        seg_tol = abs_tol / (n - 1)
        steps = np.array([adaptive_simpson(integrand, self.nodes[k], self.nodes[k + 1], seg_tol)
                          for k in range(n - 1)])
        cum = np.concatenate([[0.0], np.cumsum(steps)])
        self.values = cum - self._value_from_nodes(cum, self.ref)
        d = np.diff(self.values)
        if not (np.all(d > 0) or np.all(d < 0)):
            raise QuadratureError("integrand changes sign; the primitive is not monotone")
        self.increasing = bool(d[0] > 0)
        self._keys = (self.values if self.increasing else self.values[::-1]).tolist()

    def _value_from_nodes(self, table: np.ndarray, x: float) -> float:
        k = self._nearest(x)
        return table[k] + adaptive_simpson(self.integrand, self.nodes[k], x, self.abs_tol)

    def _nearest(self, x: float) -> int:
        lo, hi = self.nodes[0], self.nodes[-1]
        step = (hi - lo) / (len(self.nodes) - 1)
        return int(min(max(round((x - lo) / step), 0), len(self.nodes) - 1))

    def __call__(self, x: float) -> float:
        return float(self._value_from_nodes(self.values, float(x)))

    def inverse(self, v: float, tol: float = 1e-13) -> float:
        """The unique ``x`` in the tabulated range with ``H(x) = v``."""
        n = len(self._keys)
        j = min(max(bisect.bisect_left(self._keys, v), 1), n - 1)
        if not self.increasing:
            j = n - j
        a, b = self.nodes[j - 1], self.nodes[j]
        # Newton from the left node; H' is the integrand itself
        x, base = a, self.values[j - 1]
        hx = base
        for _ in range(12):
            slope = self.integrand(x)
            if slope == 0:
                break
            step = (v - hx) / slope
            x_new = x + step
            if not a <= x_new <= b:
                break
            x = x_new
            hx = base + adaptive_simpson(self.integrand, a, x, self.abs_tol)
            if abs(v - hx) <= tol * max(1.0, abs(v)) or abs(step) <= 4e-16 * (abs(a) + abs(b)):
                return float(x)
        return invert_monotone(self.as_generator(), v, (a, b), tol, check_monotone=False)

    def as_generator(self, name: str = "H") -> GeneratorFunction:
        return GeneratorFunction(self, name=name, differentiable=False, vectorized=False)

    def table(self, n: int = 33) -> list[tuple[float, float]]:
        """``n`` evenly spaced (x, H(x)) rows sampled from the nodes."""
        idx = np.linspace(0, len(self.nodes) - 1, n).round().astype(int)
        return [(float(self.nodes[k]), float(self.values[k])) for k in idx]
