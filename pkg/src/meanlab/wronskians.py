"""Derivative determinants W^{i,j}, the ODE coefficients Φ, Ψ, and quadratic P."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, TextIO

import numpy as np

from .errors import PreconditionError, SingularWronskianError
from .exprlang import GeneratorFunction, as_generator
from .means import DEFAULT_GRID, Interval

MAX_WRONSKIAN_ORDER = 3
SINGULAR_RTOL = 1e-13
PROFILE_COLUMNS = ("x", "W10", "W20", "W21", "Phi", "Psi")


def wronskian(f, g, i: int, j: int, x: float) -> float:
    """W^{i,j}_{f,g}(x) = f^(i)(x) g^(j)(x) - f^(j)(x) g^(i)(x)."""
    if not (0 <= i <= MAX_WRONSKIAN_ORDER and 0 <= j <= MAX_WRONSKIAN_ORDER):
        raise PreconditionError(f"derivative orders must be in 0..{MAX_WRONSKIAN_ORDER}, got ({i}, {j})")
    f, g = as_generator(f), as_generator(g)
    order = max(i, j, 1)
    df = f.jet(x, order).derivatives()
    dg = g.jet(x, order).derivatives()
    return df[i] * dg[j] - df[j] * dg[i]


class DerivativeTable:
    """Derivatives of f and g up to ``order`` on a grid, with W^{i,j} helpers."""

    def __init__(self, f: GeneratorFunction, g: GeneratorFunction, xs, order: int):
        self.x = np.asarray(xs, dtype=float).ravel()
        self.F = f.derivatives(self.x, order)
        self.G = g.derivatives(self.x, order)

    def W(self, i: int, j: int) -> np.ndarray:
        return self.F[i] * self.G[j] - self.F[j] * self.G[i]

    def magnitude(self, i: int, j: int) -> np.ndarray:
        """Sum of the absolute products in W^{i,j}; a cancellation-aware scale."""
        return np.abs(self.F[i] * self.G[j]) + np.abs(self.F[j] * self.G[i])

    def checked_W10(self) -> np.ndarray:
        w10 = self.W(1, 0)
        scale = self.magnitude(1, 0)
        bad = np.flatnonzero(~(np.abs(w10) > SINGULAR_RTOL * scale))
        if bad.size:
            k = int(bad[0])
            raise SingularWronskianError(float(self.x[k]), float(w10[k]))
        return w10

    def phi_psi(self) -> tuple[np.ndarray, np.ndarray]:
        w10 = self.checked_W10()
        return self.W(2, 0) / w10, -self.W(2, 1) / w10

    def psi_prime(self) -> np.ndarray:
        """Ψ' by the quotient rule, using (W^{2,1})' = W^{3,1} and (W^{1,0})' = W^{2,0}."""
        w10 = self.checked_W10()
        return (self.W(2, 1) * self.W(2, 0) - self.W(3, 1) * w10) / w10 ** 2


def phi_psi(f, g, x: float) -> tuple[float, float]:
    """(Φ, Ψ) = (W^{2,0}/W^{1,0}, -W^{2,1}/W^{1,0}) at ``x``."""
    table = DerivativeTable(as_generator(f), as_generator(g), [x], 2)
    phi, psi = table.phi_psi()
    return float(phi[0]), float(psi[0])


@dataclass(frozen=True)
class WronskianProfile:
    grid: np.ndarray
    W10: np.ndarray
    W20: np.ndarray
    W21: np.ndarray
    Phi: np.ndarray
    Psi: np.ndarray

    def rows(self):
        for k in range(len(self.grid)):
            yield (self.grid[k], self.W10[k], self.W20[k], self.W21[k], self.Phi[k], self.Psi[k])

    def write_csv(self, out: "str | Path | TextIO") -> None:
        if isinstance(out, (str, Path)):
            with open(out, "w", encoding="utf-8", newline="") as fh:
                self.write_csv(fh)
            return
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(PROFILE_COLUMNS)
        for row in self.rows():
            writer.writerow([repr(float(v)) for v in row])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def wronskian_profile(f, g, domain: Interval, n: int = DEFAULT_GRID) -> WronskianProfile:
    table = DerivativeTable(as_generator(f), as_generator(g), domain.grid(n), 2)
    phi, psi = table.phi_psi()
    return WronskianProfile(table.x, table.W(1, 0), table.W(2, 0), table.W(2, 1), phi, psi)


def verify_fundamental_ode(f, g, grid: Sequence[float], tol: float = 1e-10) -> bool:
    """Check that both f and g satisfy Y'' = Φ Y' + Ψ Y on ``grid``."""
    table = DerivativeTable(as_generator(f), as_generator(g), grid, 2)
    phi, psi = table.phi_psi()
    for D in (table.F, table.G):
        lhs = D[2]
        rhs = phi * D[1] + psi * D[0]
        scale = np.abs(D[2]) + np.abs(phi * D[1]) + np.abs(psi * D[0])
        if np.any(np.abs(lhs - rhs) > tol * np.maximum(scale, np.finfo(float).tiny)):
            return False
    return True


@dataclass(frozen=True)
class QuadraticPolynomial:
    """P(u) = alpha + beta·u + gamma·u² (degree at most two)."""

    alpha: float
    beta: float
    gamma: float

    def __call__(self, u):
        # Horner form works for floats, arrays and jets alike
        return self.alpha + u * (self.beta + self.gamma * u)

    def derivative(self, u):
        return self.beta + 2.0 * self.gamma * u

    def second_derivative(self) -> float:
        return 2.0 * self.gamma

    def discriminant(self) -> float:
        return self.beta * self.beta - 4.0 * self.alpha * self.gamma

    def minimum_on(self, lo: float, hi: float) -> tuple[float, float]:
        """(u, P(u)) minimizing P over the closed interval [lo, hi]."""
        candidates = [lo, hi]
        if self.gamma > 0:
            v = -self.beta / (2.0 * self.gamma)
            if lo < v < hi:
                candidates.append(v)
        best = min(candidates, key=lambda u: self(u))
        return best, self(best)

    def nonpositive_witness(self, lo: float, hi: float) -> tuple[float, float] | None:
        """A point of the open interval (lo, hi) where P <= 0, or ``None`` if P > 0 there."""
        u, v = self.minimum_on(lo, hi)
        if v > 0:
            return None
        if lo < u < hi:
            return u, v
        # minimum sits at an endpoint: P > 0 inside unless the endpoint value is negative
        # or P vanishes identically along the interval
        if v < 0:
            inner = math.nextafter(u, hi) if u == lo else math.nextafter(u, lo)
            return inner, self(inner)
        mid = 0.5 * (lo + hi)
        if self(mid) <= 0:
            return mid, self(mid)
        return None

    def is_positive_on(self, lo: float, hi: float) -> bool:
        return self.nonpositive_witness(lo, hi) is None


def discriminant_identity_check(P: QuadraticPolynomial, points: Sequence[float],
                                tol: float = 1e-12) -> bool:
    """(P')² - 2 P'' P equals the discriminant at every point, to ``tol`` relative."""
    D = P.discriminant()
    for u in points:
        lhs = P.derivative(u) ** 2 - 2.0 * P.second_derivative() * P(u)
        scale = max(1.0, abs(P.derivative(u)) ** 2, abs(2.0 * P.second_derivative() * P(u)))
        if abs(lhs - D) > tol * scale:
            return False
    return True
