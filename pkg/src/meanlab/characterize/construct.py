"""Explicit solution families of the functional equation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from ..errors import DomainSplitError, PositivityError, PreconditionError
from ..exprlang import GeneratorFunction
from ..exprlang import elementary as el
from ..exprlang.jets import TaylorJet
from ..kernels import C, S
from ..means import Interval
from ..quadrature import DEFAULT_ABS_TOL, PrimitiveTable
from ..wronskians import QuadraticPolynomial
from .fe import FEInstance

HALF_TOL = 1e-9
DISCRIMINANT_TOL = 1e-12
ZERO_SCAN = 4097


def is_half(t: float) -> bool:
    return abs(t - 0.5) < HALF_TOL


def _scan_zeros(fn, lo: float, hi: float, n: int = ZERO_SCAN) -> list[float]:
    xs = np.linspace(lo, hi, n)
    vs = np.broadcast_to(np.asarray(fn(xs), dtype=float), xs.shape)
    zeros = [float(x) for x, v in zip(xs, vs) if v == 0]
    for k in np.flatnonzero(vs[:-1] * vs[1:] < 0):
        zeros.append(float(brentq(fn, xs[k], xs[k + 1], xtol=1e-15)))
    return sorted(zeros)


def construct_from_kernel(p: float, a: float, b: float, c: float, d: float,
                          domain: Interval, t: float = 0.5) -> FEInstance:
    """Solution with ``f = a S_p + b C_p`` and ``f φ = c S_p + d C_p``.

    For ``p != 0`` the equation only holds at ``t = 1/2``.
    """
    p, a, b, c, d = (float(v) for v in (p, a, b, c, d))
    if a * d - b * c == 0:
        raise PreconditionError("coefficients must satisfy ad - bc != 0")
    if p != 0 and not is_half(t):
        raise PreconditionError(f"p = {p:g} requires t = 1/2, got t = {t!r}")
    if p != 0:
        t = 0.5

    def f_fn(v):
        return a * S(p, v) + b * C(p, v)

    def k_fn(v):
        return c * S(p, v) + d * C(p, v)

    zeros = _scan_zeros(f_fn, *domain.inset())
    if zeros:
        raise DomainSplitError(zeros)
    f = GeneratorFunction(f_fn, name=f"{a:g}*S[{p:g}] + {b:g}*C[{p:g}]")
    phi = GeneratorFunction(lambda v: el.divide(k_fn(v), f_fn(v)),
                            name=f"({c:g}*S[{p:g}] + {d:g}*C[{p:g}]) / f")
    instance = FEInstance(phi, f, t, domain)
    instance.check_monotone()
    return instance


@dataclass(frozen=True, eq=False)
class PolynomialInstance(FEInstance):
    """Instance built from a positive quadratic ``P`` on ``source``.

    ``psi`` is the primitive of ``1/P`` vanishing at the midpoint of
    ``source``; the instance domain is ``psi(source)``.
    """

    polynomial: QuadraticPolynomial = field(default=None)
    psi: GeneratorFunction = field(default=None)
    source: Interval = field(default=None)

    def kernel_parameter(self, n: int = 65) -> float:
        """Median of ``f''/f`` over the domain grid."""
        xs = self.domain.grid(n)
        ratios = [self.f.derivative(x, 2) / self.f(x) for x in xs]
        return float(np.median(ratios))


def _ode_series(P: QuadraticPolynomial, u0: float, order: int) -> list[float]:
    # Taylor coefficients of the solution of u' = P(u), u(0) = u0
    coeffs = [u0] + [0.0] * order
    for k in range(order):
        rhs = P(TaylorJet(coeffs))
        coeffs[k + 1] = rhs[k] / (k + 1)
    return coeffs


def _primitive_series(P: QuadraticPolynomial, u0: float, psi0: float, order: int) -> list[float]:
    inv = 1.0 / P(TaylorJet.variable(u0, order))
    return [psi0] + [inv[k] / (k + 1) for k in range(order)]


def construct_from_polynomial(P: QuadraticPolynomial, domain: Interval,
                              t: float = 0.5, abs_tol: float = DEFAULT_ABS_TOL) -> PolynomialInstance:
    """Solution ``φ = ψ^{-1}``, ``f = 1/sqrt(P ∘ φ)`` with ``ψ' = 1/P``.

    Requires ``P > 0`` on ``domain`` and ``(t - 1/2) D_P = 0``.
    """
    witness = P.nonpositive_witness(domain.lo, domain.hi)
    if witness is not None:
        raise PositivityError(*witness)
    D = P.discriminant()
    if not is_half(t) and abs((t - 0.5) * D) > DISCRIMINANT_TOL:
        raise PreconditionError(
            f"t = {t!r} requires a vanishing discriminant, got D = {D!r}")

    table = PrimitiveTable(lambda u: 1.0 / P(u), domain, abs_tol=abs_tol)

    def psi_fn(u):
        if isinstance(u, TaylorJet):
            return u.compose(_primitive_series(P, u.value, table(u.value), u.order))
        return table(u)

    def phi_fn(v):
        if isinstance(v, TaylorJet):
            u0 = table.inverse(v.value)
            return v.compose(_ode_series(P, u0, v.order))
        return table.inverse(v)

    def f_fn(v):
        inner = phi_fn(v)
        return el.power(P(inner), -0.5)

    # 1/P > 0, so the primitive increases
    image = Interval(float(table.values[0]), float(table.values[-1]), domain.margin)
    psi = GeneratorFunction(psi_fn, name="int 1/P", vectorized=False)
    phi = GeneratorFunction(phi_fn, name="inverse of int 1/P", vectorized=False)
    f = GeneratorFunction(f_fn, name="1/sqrt(P o phi)", vectorized=False)
    return PolynomialInstance(phi, f, 0.5 if is_half(t) else t, image,
                              polynomial=P, psi=psi, source=domain)
