"""Decide ``B_{g,f} = A_h`` for two-point weighted samples via the kernel pairs."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from ..errors import (DerivativeUnavailableError, DomainError, MeanlabError,
                      PreconditionError)
from ..exprlang import GeneratorFunction, as_generator
from ..kernels import EquivalenceWitness, detect_equivalence, fit_equivalence, kernel_pair
from ..means import (GeneratorPair, WeightedSample, bajraktarevic_mean,
                     quasi_arithmetic_mean)
from ..wronskians import DerivativeTable
from .construct import is_half
from .tolerances import Tolerances

P_SEARCH = (-50.0, 50.0)
P_SCAN = 101
VALIDATION_PAIRS = 64


@dataclass(frozen=True)
class OracleResult:
    passed: bool
    p: float
    witness: EquivalenceWitness | None
    mean_gap: float | None
    p_method: str


def _p_from_derivatives(pair: GeneratorPair, h: GeneratorFunction) -> float:
    # (S_p∘h, C_p∘h) solve Y'' = (h''/h') Y' + p h'^2 Y, and Ψ is invariant
    # under the equivalence, so Ψ / h'^2 recovers p
    xs = pair.domain.grid(65)
    table = DerivativeTable(pair.f, pair.g, xs, 2)
    _, psi = table.phi_psi()
    hp = h.derivatives(xs, 1)[1]
    return float(np.median(psi / hp ** 2))


def _equivalence_residual(pair: GeneratorPair, h: GeneratorFunction, p: float) -> float:
    s, c = kernel_pair(p, h)
    try:
        return fit_equivalence(pair, GeneratorPair(s, c, pair.domain)).residual
    except (MeanlabError, FloatingPointError, OverflowError, ValueError):
        return math.inf


def _p_from_search(pair: GeneratorPair, h: GeneratorFunction) -> float:
    grid = np.linspace(*P_SEARCH, P_SCAN)
    res = np.array([_equivalence_residual(pair, h, p) for p in grid])
    k = int(np.argmin(res))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
    if res[k] == 0:
        return float(grid[k])
    opt = minimize_scalar(lambda p: _equivalence_residual(pair, h, p), bounds=(lo, hi),
                          method="bounded", options={"xatol": 1e-10})
    return float(opt.x) if opt.fun <= res[k] else float(grid[k])


def estimate_kernel_parameter(pair: GeneratorPair, h: GeneratorFunction) -> tuple[float, str]:
    if pair.differentiable and h.differentiable:
        try:
            return _p_from_derivatives(pair, h), "derivatives"
        except (DerivativeUnavailableError, DomainError):
            pass
    return _p_from_search(pair, h), "search"


def two_point_gap(pair: GeneratorPair, h: GeneratorFunction, t: float,
                  rng: np.random.Generator, n: int = VALIDATION_PAIRS,
                  inverse=None) -> float:
    """Largest ``|B_{g,f} - A_h|`` over random pairs with weights ``(t, 1-t)``."""
    lo, hi = pair.domain.inset()
    pts = rng.uniform(lo, hi, size=(n, 2))
    gap = 0.0
    for x, y in pts:
        sample = WeightedSample((x, y), (t, 1.0 - t))
        b = bajraktarevic_mean(pair, sample, check_class=False)
        if inverse is None:
            a = quasi_arithmetic_mean(h, sample, check_monotone=False)
        else:
            a = inverse(t * h(x) + (1.0 - t) * h(y))
        gap = max(gap, abs(b - a))
    return gap


def weighted_equality_oracle(pair: GeneratorPair, h, t: float,
                             tol: Tolerances | None = None, seed: int = 42) -> OracleResult:
    """Test ``(f, g) ~ (S_p∘h, C_p∘h)``; at ``t != 1/2`` only ``p = 0`` is allowed.

    On a pass the two means are compared on random two-point samples with
    weights ``(t, 1-t)``; the gap must stay below ``tol.identity`` times the
    domain width.
    """
    tol = tol or Tolerances()
    if not 0.0 < t < 1.0:
        raise PreconditionError(f"t must lie strictly between 0 and 1, got {t!r}")
    h = as_generator(h)
    pair.check_class()
    if is_half(t):
        p, method = estimate_kernel_parameter(pair, h)
    else:
        p, method = 0.0, "fixed"
    s, c = kernel_pair(p, h)
    witness = detect_equivalence(pair, GeneratorPair(s, c, pair.domain), tol=tol.equivalence)
    if witness is None:
        return OracleResult(False, p, None, None, method)
    gap = two_point_gap(pair, h, t, np.random.default_rng(seed))
    passed = gap <= tol.identity * pair.domain.width
    return OracleResult(passed, p, witness, gap, method)
