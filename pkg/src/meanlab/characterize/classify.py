"""Classify a Bajraktarević pair against the quasi-arithmetic means.

Two levels are decided: equality with some ``A_h`` for two equal weights
(``symmetric_QA``) and equality for every weight vector and arity
(``weighted_QA``). Each level is tested by several independent conditions
whose verdicts must agree.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..errors import DerivativeUnavailableError, DomainError, QuadratureError
from ..means import (DEFAULT_GRID, GeneratorPair, WeightedSample, bajraktarevic_mean,
                     quasi_arithmetic_mean)
from ..quadrature import PrimitiveTable
from ..wronskians import DerivativeTable, QuadraticPolynomial
from .fe import SCHEMA_VERSION, _json_float
from .tolerances import Tolerances

FIT_NODES = 8
MEAN_GRID = 9
H_TABLE_ROWS = 33
WEIGHTED_SAMPLES = 24


class Verdict(str, enum.Enum):
    SYMMETRIC_QA = "symmetric_QA"
    WEIGHTED_QA = "weighted_QA"
    NOT_QA = "not_QA"
    INCONCLUSIVE = "inconclusive"


@dataclass
class ConditionResult:
    """Outcome of one condition; ``accepted`` is ``None`` when it did not run."""

    ran: bool
    accepted: bool | None = None
    residual: float | None = None
    tolerance: float | None = None
    details: dict[str, Any] = field(default_factory=dict)
    note: str | None = None

    @classmethod
    def skipped(cls, note: str) -> "ConditionResult":
        return cls(False, note=note)

    def to_dict(self) -> dict:
        out = {
            "ran": self.ran,
            "accepted": self.accepted,
            "residual": _json_float(self.residual),
            "tolerance": _json_float(self.tolerance),
            "note": self.note,
        }
        for k, v in self.details.items():
            out[k] = _jsonable(v)
        return out


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)) or v is None or isinstance(v, str):
        return bool(v) if isinstance(v, np.bool_) else v
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return _json_float(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return str(v)


@dataclass
class ClassificationReport:
    verdict: Verdict
    p: float | None = None
    quadratic_witness: tuple[float, float, float] | None = None
    linear_witness: tuple[float, float] | None = None
    delta: float | None = None
    h: list[tuple[float, float]] | None = None
    residuals: dict[str, ConditionResult] = field(default_factory=dict)
    symmetric_verdict: Verdict | None = None

    def accepted(self, name: str) -> bool | None:
        r = self.residuals.get(name)
        return None if r is None else r.accepted

    def to_dict(self) -> dict:
        q = self.quadratic_witness
        lw = self.linear_witness
        return {
            "schema_version": SCHEMA_VERSION,
            "verdict": self.verdict.value,
            "p": _json_float(self.p),
            "quadratic_witness": None if q is None else
            {"alpha": _json_float(q[0]), "beta": _json_float(q[1]), "gamma": _json_float(q[2])},
            "linear_witness": None if lw is None else
            {"a": _json_float(lw[0]), "b": _json_float(lw[1])},
            "delta": _json_float(self.delta),
            "h": None if self.h is None else [[_json_float(x), _json_float(v)] for x, v in self.h],
            "residuals": {k: r.to_dict() for k, r in self.residuals.items()},
        }


# -- fits --------------------------------------------------------------------

def _fit_constant_one(pair: GeneratorPair, basis, tol: float) -> tuple[np.ndarray, ConditionResult]:
    """Least squares for ``Σ c_k basis_k(f, g) = 1`` at Chebyshev nodes."""
    nodes = pair.domain.chebyshev(FIT_NODES)
    A = basis(pair.f.values(nodes), pair.g.values(nodes))
    coef, _, rank, _ = np.linalg.lstsq(A, np.ones(len(nodes)), rcond=None)
    grid = pair.domain.grid(DEFAULT_GRID)
    err = float(np.max(np.abs(basis(pair.f.values(grid), pair.g.values(grid)) @ coef - 1.0)))
    full = rank == A.shape[1]
    res = ConditionResult(True, err <= tol, err, tol,
                          {"coefficients": [float(c) for c in coef], "full_rank": bool(full)},
                          None if full else "rank-deficient basis; minimum-norm solution")
    return coef, res


def quadratic_form_condition(pair: GeneratorPair, tol: Tolerances):
    return _fit_constant_one(pair, lambda F, G: np.column_stack([F * F, F * G, G * G]),
                             tol.identity)


def linear_form_condition(pair: GeneratorPair, tol: Tolerances):
    return _fit_constant_one(pair, lambda F, G: np.column_stack([F, G]), tol.identity)


# -- derivative conditions ---------------------------------------------------

def _ratio_residual(num: np.ndarray, scale: np.ndarray) -> float:
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(num == 0, 0.0, np.abs(num) / scale)
    return float(np.max(r))


def wronskian_cubic_condition(table: DerivativeTable, tol: Tolerances) -> tuple[float, ConditionResult]:
    """``W21 = δ W10³`` with δ the median of the pointwise ratios."""
    w10 = table.checked_W10()
    w21 = table.W(2, 1)
    delta = float(np.median(w21 / w10 ** 3))
    scale = table.magnitude(2, 1) + abs(delta) * table.magnitude(1, 0) ** 3
    res = _ratio_residual(w21 - delta * w10 ** 3, scale)
    return delta, ConditionResult(True, res <= tol.derivative, res, tol.derivative,
                                  {"delta": delta})


def psi_equation_condition(table: DerivativeTable, tol: Tolerances) -> ConditionResult:
    """``Ψ' = 2ΦΨ``, cleared of the common factor ``W10²``."""
    w10 = table.checked_W10()
    w20, w21, w31 = table.W(2, 0), table.W(2, 1), table.W(3, 1)
    num = 3.0 * w20 * w21 - w31 * w10
    scale = 3.0 * table.magnitude(2, 0) * table.magnitude(2, 1) + table.magnitude(3, 1) * table.magnitude(1, 0)
    res = _ratio_residual(num, scale)
    phi, psi = table.phi_psi()
    return ConditionResult(True, res <= tol.derivative, res, tol.derivative,
                           {"phi_range": [float(phi.min()), float(phi.max())],
                            "psi_range": [float(psi.min()), float(psi.max())]})


def psi_vanishes_condition(table: DerivativeTable, tol: Tolerances) -> ConditionResult:
    table.checked_W10()
    res = _ratio_residual(table.W(2, 1), table.magnitude(2, 1))
    return ConditionResult(True, res <= tol.derivative, res, tol.derivative)


def primitive_mean_condition(pair: GeneratorPair, tol: Tolerances
                             ) -> tuple[PrimitiveTable, ConditionResult]:
    """Compare ``B_{g,f}`` with ``A_h``, ``h = ∫ W10``, at equal weights."""

    def w10(x: float) -> float:
        jf, jg = pair.f.jet(x, 1), pair.g.jet(x, 1)
        return jf[1] * jg[0] - jf[0] * jg[1]

    h = PrimitiveTable(w10, pair.domain, abs_tol=tol.quadrature)
    xs = pair.domain.grid(MEAN_GRID)
    gap = 0.0
    for i, x in enumerate(xs):
        for y in xs[i + 1:]:
            b = bajraktarevic_mean(pair, WeightedSample((x, y)), tol.root, check_class=False)
            a = h.inverse(0.5 * (h(x) + h(y)))
            gap = max(gap, abs(a - b))
    rel = gap / pair.domain.width
    return h, ConditionResult(True, rel <= tol.identity, rel, tol.identity)


# -- classification -------------------------------------------------------------

def _combine(results: list[ConditionResult], yes: Verdict, no: Verdict) -> Verdict:
    ran = [r.accepted for r in results if r.ran]
    if ran and all(ran):
        return yes
    if ran and not any(ran):
        return no
    return Verdict.INCONCLUSIVE


def classify_symmetric(pair: GeneratorPair, tol: Tolerances | None = None) -> ClassificationReport:
    """Decide whether ``B_{g,f}(x, y) = A_h(x, y)`` for some h (equal weights)."""
    tol = tol or Tolerances()
    pair.check_class()
    report = ClassificationReport(Verdict.INCONCLUSIVE)
    coef, quad = quadratic_form_condition(pair, tol)
    report.residuals["quadratic_form"] = quad
    if quad.accepted:
        report.quadratic_witness = tuple(float(c) for c in coef)

    table = None
    insufficient = None
    try:
        table = DerivativeTable(pair.f, pair.g, pair.domain.grid(DEFAULT_GRID), 3)
    except (DerivativeUnavailableError, DomainError) as exc:
        insufficient = f"insufficient regularity: {exc}"

    if table is None:
        for name in ("primitive_mean", "wronskian_cubic", "psi_equation"):
            report.residuals[name] = ConditionResult.skipped(insufficient)
        report.verdict = Verdict.INCONCLUSIVE
        report.symmetric_verdict = report.verdict
        return report

    try:
        h, prim = primitive_mean_condition(pair, tol)
        report.h = h.table(H_TABLE_ROWS)
    except QuadratureError as exc:
        prim = ConditionResult(True, False, None, tol.identity, note=f"quadrature failed: {exc}")
    report.residuals["primitive_mean"] = prim

    delta, cubic = wronskian_cubic_condition(table, tol)
    report.residuals["wronskian_cubic"] = cubic
    report.residuals["psi_equation"] = psi_equation_condition(table, tol)

    verdict = _combine([report.residuals[k] for k in
                        ("quadratic_form", "primitive_mean", "wronskian_cubic", "psi_equation")],
                       Verdict.SYMMETRIC_QA, Verdict.NOT_QA)
    if cubic.accepted:
        report.delta = delta
        # the family parameter, measured against h = ∫ W10
        report.p = 0.0 - delta
    if report.quadratic_witness is not None and cubic.accepted:
        D = QuadraticPolynomial(*report.quadratic_witness).discriminant()
        cubic.details["discriminant_gap"] = abs(delta + D / 4.0)
    report.verdict = verdict
    report.symmetric_verdict = verdict
    return report


def _weighted_mean_check(pair: GeneratorPair, a: float, b: float, tol: Tolerances,
                         seed: int) -> ConditionResult:
    h = -b * pair.f + a * pair.g
    rng = np.random.default_rng(seed)
    lo, hi = pair.domain.inset()
    samples = [WeightedSample(rng.uniform(lo, hi, 2), (0.3, 0.7))]
    for k in range(WEIGHTED_SAMPLES):
        n = (2, 3, 4)[k % 3]
        samples.append(WeightedSample(rng.uniform(lo, hi, n), rng.uniform(0.05, 1.0, n)))
    gap = 0.0
    for s in samples:
        m_b = bajraktarevic_mean(pair, s, tol.root, check_class=False)
        m_a = quasi_arithmetic_mean(h, s, tol.root)
        gap = max(gap, abs(m_a - m_b))
    rel = gap / pair.domain.width
    return ConditionResult(True, rel <= tol.identity, rel, tol.identity,
                           {"samples": len(samples)})


def classify_weighted(pair: GeneratorPair, tol: Tolerances | None = None,
                      seed: int = 42) -> ClassificationReport:
    """Decide whether ``B_{g,f} = A_h`` for all weights and arities.

    Also runs :func:`classify_symmetric`, whose fields stay populated.
    """
    tol = tol or Tolerances()
    report = classify_symmetric(pair, tol)
    coef, lin = linear_form_condition(pair, tol)
    report.residuals["linear_form"] = lin

    try:
        table = DerivativeTable(pair.f, pair.g, pair.domain.grid(DEFAULT_GRID), 2)
        report.residuals["psi_vanishes"] = psi_vanishes_condition(table, tol)
    except (DerivativeUnavailableError, DomainError) as exc:
        report.residuals["psi_vanishes"] = ConditionResult.skipped(f"insufficient regularity: {exc}")

    level = [lin, report.residuals["psi_vanishes"]]
    if lin.accepted:
        a, b = (float(c) for c in coef)
        report.linear_witness = (a, b)
        means = _weighted_mean_check(pair, a, b, tol, seed)
        report.residuals["weighted_means"] = means
        level.append(means)
    else:
        report.residuals["weighted_means"] = ConditionResult.skipped("no linear witness")

    weighted = _combine(level, Verdict.WEIGHTED_QA, Verdict.NOT_QA)
    symmetric = report.symmetric_verdict
    insufficient = any(not r.ran for r in level[:2])
    if weighted is Verdict.WEIGHTED_QA and symmetric is Verdict.SYMMETRIC_QA and not insufficient:
        report.verdict = Verdict.WEIGHTED_QA
    elif weighted is Verdict.NOT_QA and not insufficient:
        report.verdict = symmetric
    else:
        report.verdict = Verdict.INCONCLUSIVE
    return report
