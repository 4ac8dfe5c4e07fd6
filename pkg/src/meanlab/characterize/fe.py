"""Grid verification of the two-point functional equation and its first integral."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from ..errors import (DerivativeUnavailableError, DomainError, EvaluationError,
                      FunctionVanishesError, PreconditionError)
from ..exprlang import GeneratorFunction, as_generator
from ..means import DEFAULT_GRID, Interval
from .tolerances import Tolerances

SCHEMA_VERSION = "1.0"
MIN_GRID = 16
GAMMA_FLOOR = 1e-12


@dataclass(frozen=True)
class FEInstance:
    """Data ``(φ, f, t)`` on ``domain`` for which the equation is tested."""

    phi: GeneratorFunction
    f: GeneratorFunction
    t: float
    domain: Interval

    def __post_init__(self):
        object.__setattr__(self, "phi", as_generator(self.phi))
        object.__setattr__(self, "f", as_generator(self.f))
        t = float(self.t)
        if not 0.0 < t < 1.0:
            raise PreconditionError(f"t must lie strictly between 0 and 1, got {t!r}")
        object.__setattr__(self, "t", t)

    def with_t(self, t: float) -> "FEInstance":
        return dataclasses.replace(self, t=t)

    def check_monotone(self, n: int = DEFAULT_GRID) -> None:
        v = self.phi.values(self.domain.grid(n))
        d = np.diff(v)
        if not (np.all(d > 0) or np.all(d < 0)):
            raise PreconditionError(f"phi = {self.phi.name} is not strictly monotone on the domain")


@dataclass(frozen=True)
class FEReport:
    max_residual: float
    residual_grid: np.ndarray
    gamma_estimate: float | None
    gamma_variance: float | None
    grid: np.ndarray
    trivial: bool = False

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "max_residual": _json_float(self.max_residual),
            "gamma_estimate": _json_float(self.gamma_estimate),
            "gamma_variance": _json_float(self.gamma_variance),
        }

    def residual_rows(self):
        """``(x, y, residual)`` triples for CSV export."""
        for i, x in enumerate(self.grid):
            for j, y in enumerate(self.grid):
                yield float(x), float(y), float(self.residual_grid[i, j])


def _json_float(v):
    if v is None:
        return None
    v = float(v)
    return v if math.isfinite(v) else None


def _values(fn: GeneratorFunction, xs: np.ndarray, label: str) -> np.ndarray:
    try:
        return fn.values(xs)
    except DomainError as exc:
        point = exc.point
        if point is None:
            raise EvaluationError(f"{label} failed: {exc}", ()) from exc
        raise EvaluationError(f"{label} failed: {exc}", (float(point),)) from exc


def first_integral_samples(f: GeneratorFunction, phi: GeneratorFunction,
                           xs: np.ndarray) -> np.ndarray:
    """``f² φ'`` at each point of ``xs``."""
    out = np.empty(len(xs))
    for k, x in enumerate(xs):
        out[k] = f(x) ** 2 * phi.derivative(x, 1)
    return out


def _gamma_stats(samples: np.ndarray) -> tuple[float, float]:
    mean = float(np.mean(samples))
    if mean == 0:
        return 0.0, math.inf
    spread = float(np.max(np.abs(samples - mean))) / abs(mean)
    return mean, spread


def fe_residual(instance: FEInstance, grid_n: int = 64) -> FEReport:
    """Residual of the equation on a ``grid_n × grid_n`` grid of the inset domain.

    The maximum is normalized by ``max|f| · (max φ - min φ)``, which is
    unchanged when a constant is added to φ.
    """
    if grid_n < MIN_GRID:
        raise PreconditionError(f"grid_n must be at least {MIN_GRID}, got {grid_n}")
    t = instance.t
    xs = instance.domain.grid(grid_n)
    fx = _values(instance.f, xs, "f")
    px = _values(instance.phi, xs, "phi")
    X, Y = np.meshgrid(xs, xs, indexing="ij")
    M = t * X + (1.0 - t) * Y
    pm = _values(instance.phi, M.ravel(), "phi at t x + (1-t) y").reshape(M.shape)
    FX, FY = fx[:, None], fx[None, :]
    R = (t * FX + (1.0 - t) * FY) * pm - t * (FX * px[:, None]) - (1.0 - t) * (FY * px[None, :])

    bad = np.argwhere(~np.isfinite(R))
    if bad.size:
        i, j = bad[0]
        raise EvaluationError("non-finite residual", (float(xs[i]), float(xs[j])))

    fmax = float(np.max(np.abs(fx)))
    if fmax == 0.0:
        # f ≡ 0 solves the equation for every φ
        return FEReport(0.0, np.zeros_like(R), None, None, xs, trivial=True)
    scale = fmax * float(np.ptp(px))
    max_res = float(np.max(np.abs(R))) / scale if scale > 0 else math.inf

    gamma = variance = None
    try:
        gamma, variance = _gamma_stats(first_integral_samples(instance.f, instance.phi, xs))
    except (DerivativeUnavailableError, DomainError):
        pass
    return FEReport(max_res, R, gamma, variance, xs)


def check_first_integral(instance: FEInstance, grid_n: int = DEFAULT_GRID,
                         tol: float = Tolerances().identity) -> tuple[float, bool]:
    """``(γ, pass)`` where γ is the grid mean of ``f² φ'``.

    Raises :class:`FunctionVanishesError` if f has a zero or sign change on
    the grid, since then ``f² φ'`` cannot be a nonzero constant.
    """
    xs = instance.domain.grid(grid_n)
    fv = _values(instance.f, xs, "f")
    zero = np.flatnonzero(fv == 0)
    if zero.size:
        raise FunctionVanishesError(float(xs[zero[0]]))
    flips = np.flatnonzero(np.sign(fv[1:]) != np.sign(fv[:-1]))
    if flips.size:
        k = int(flips[0])
        raise FunctionVanishesError(float(0.5 * (xs[k] + xs[k + 1])))
    gamma, spread = _gamma_stats(first_integral_samples(instance.f, instance.phi, xs))
    return gamma, bool(spread <= tol and abs(gamma) > GAMMA_FLOOR)


def check_second_order_identity(f, phi, grid, tol: float = Tolerances().derivative) -> bool:
    """``2 f' φ' + f φ'' = 0`` pointwise, relative to the size of both terms."""
    f, phi = as_generator(f), as_generator(phi)
    for x in np.asarray(grid, dtype=float).ravel():
        F = f.jet(x, 2).derivatives()
        P = phi.jet(x, 2).derivatives()
        a, b = 2.0 * F[1] * P[1], F[0] * P[2]
        scale = abs(a) + abs(b)
        if abs(a + b) > tol * scale:
            return False
    return True
